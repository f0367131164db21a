// floquet-work: command-line front end over the libfloquet C interface.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "floquet/floquet_c.h"
#include "run_config.hpp"

namespace fs = std::filesystem;
using fwcli::ConfigError;
using fwcli::RunConfig;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;
constexpr int kExitCaseBase = 10;

struct Failure {
  int code;
  std::string message;
};

void check(fw_status st, const char* what) {
  if (st == FW_OK) return;
  int code = kExitNumerical;
  if (st == FW_ERR_INVALID_ARGUMENT) code = kExitConfig;
  if (st == FW_ERR_IO) code = kExitIo;
  throw Failure{code, std::string(what) + ": " + fw_last_error()};
}

struct ProtocolDeleter {
  void operator()(fw_protocol* p) const { fw_protocol_free(p); }
};
struct SpectrumDeleter {
  void operator()(fw_spectrum* s) const { fw_spectrum_free(s); }
};
struct HistogramDeleter {
  void operator()(fw_histogram* h) const { fw_histogram_free(h); }
};
using ProtocolPtr = std::unique_ptr<fw_protocol, ProtocolDeleter>;
using SpectrumPtr = std::unique_ptr<fw_spectrum, SpectrumDeleter>;
using HistogramPtr = std::unique_ptr<fw_histogram, HistogramDeleter>;

int worker_count() {
  const char* env = std::getenv("FLOQUET_WORKERS");
  if (env == nullptr || *env == '\0') return 0;
  const long n = fwcli::parse_integer("FLOQUET_WORKERS", env);
  if (n < 0) throw ConfigError("FLOQUET_WORKERS must be >= 0");
  return static_cast<int>(n);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

struct Context {
  RunConfig cfg;
  fs::path config_dir;
  fs::path out_dir;
  bool csv = true;
  bool json = true;
  int workers = 0;
  std::string provenance;

  const char* path(const std::string& stem, bool enabled, const char* ext, std::string& storage) const {
    if (!enabled) return nullptr;
    storage = (out_dir / (stem + ext)).string();
    return storage.c_str();
  }
};

Context make_context(const std::string& config_path, const std::string& out_flag) {
  Context ctx;
  ctx.cfg = RunConfig::load(config_path);
  ctx.config_dir = fs::path(config_path).parent_path();
  const std::string format = ctx.cfg.text_or("output.format", "both");
  if (format == "csv") {
    ctx.json = false;
  } else if (format == "json") {
    ctx.csv = false;
  } else if (format != "both") {
    throw ConfigError("key 'output.format' must be csv, json or both");
  }
  if (!out_flag.empty()) {
    ctx.out_dir = out_flag;
  } else if (ctx.cfg.has("output.directory")) {
    ctx.out_dir = ctx.cfg.text("output.directory");
  } else {
    throw ConfigError("no output directory: pass --out or set 'output.directory'");
  }
  ctx.workers = worker_count();
  ctx.provenance = ctx.cfg.to_json();
  std::error_code ec;
  fs::create_directories(ctx.out_dir, ec);
  if (ec) throw Failure{kExitIo, "cannot create output directory " + ctx.out_dir.string() + ": " + ec.message()};
  return ctx;
}

std::vector<double> read_table(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("key 'protocol.table': cannot read " + path.string());
  std::vector<double> samples;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream fields(line);
    std::string tok;
    while (fields >> tok) samples.push_back(fwcli::parse_number("protocol.table", tok));
  }
  return samples;
}

ProtocolPtr make_protocol(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const std::string kind = c.text_or("protocol.kind", "sinusoidal");
  fw_protocol* p = nullptr;
  if (kind == "sinusoidal") {
    check(fw_protocol_sinusoidal(c.number("protocol.h0"), c.number("protocol.amplitude"),
                                 c.number("protocol.omega"), c.number_or("protocol.phase", 0.0), &p),
          "protocol");
  } else if (kind == "tabulated") {
    fs::path table = c.text("protocol.table");
    if (table.is_relative()) table = ctx.config_dir / table;
    const std::vector<double> samples = read_table(table);
    check(fw_protocol_tabulated(samples.data(), samples.size(), c.number("protocol.omega"), &p), "protocol");
  } else {
    throw ConfigError("key 'protocol.kind' must be sinusoidal or tabulated");
  }
  return ProtocolPtr(p);
}

fw_integrator make_integrator(const RunConfig& c) {
  fw_integrator cfg = fw_integrator_default();
  const std::string method = c.text_or("grid.integrator", "rk4");
  if (method == "rk4") {
    cfg.method = FW_RK4_FIXED;
  } else if (method == "rk45") {
    cfg.method = FW_RK45_ADAPTIVE;
  } else {
    throw ConfigError("key 'grid.integrator' must be rk4 or rk45");
  }
  cfg.steps_per_period = static_cast<int>(c.integer_or("grid.steps_per_period", cfg.steps_per_period));
  cfg.tolerance = c.number_or("grid.tolerance", cfg.tolerance);
  cfg.max_steps = c.integer_or("grid.max_steps", cfg.max_steps);
  return cfg;
}

SpectrumPtr make_spectrum(const Context& ctx, const fw_protocol* p, int n_k) {
  const fw_integrator integ = make_integrator(ctx.cfg);
  fw_spectrum* s = nullptr;
  check(fw_spectrum_build(p, n_k, &integ, ctx.workers, &s), "spectrum");
  return SpectrumPtr(s);
}

int grid_size(const RunConfig& c) {
  const long n = c.integer("grid.n_k");
  if (n < 1 || n > 10000000) throw ConfigError("key 'grid.n_k' out of range");
  return static_cast<int>(n);
}

std::vector<double> s_grid(const RunConfig& c, const std::string& default_spacing) {
  const double lo = c.number("task.s_min");
  const double hi = c.number("task.s_max");
  const long n = c.integer("task.s_points");
  const std::string spacing = c.text_or("task.s_spacing", default_spacing);
  if (n < 2) throw ConfigError("key 'task.s_points' must be >= 2");
  if (!(hi > lo)) throw ConfigError("key 'task.s_max' must exceed 'task.s_min'");
  std::vector<double> s(static_cast<std::size_t>(n));
  if (spacing == "linear") {
    for (long i = 0; i < n; ++i) s[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  } else if (spacing == "log") {
    if (!(lo > 0.0)) throw ConfigError("key 'task.s_min' must be positive for log spacing");
    const double r = std::log(hi / lo);
    for (long i = 0; i < n; ++i) s[i] = lo * std::exp(r * static_cast<double>(i) / static_cast<double>(n - 1));
  } else {
    throw ConfigError("key 'task.s_spacing' must be linear or log");
  }
  s.back() = hi;
  return s;
}

fw_periods parse_periods(const std::string& key, const std::string& value) {
  if (value == "inf") return {0, 1};
  return {fwcli::parse_integer(key, value), 0};
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.flush();
  if (!out) throw Failure{kExitIo, "cannot write " + path};
}

int cmd_spectrum(const Context& ctx) {
  const ProtocolPtr p = make_protocol(ctx);
  const SpectrumPtr s = make_spectrum(ctx, p.get(), grid_size(ctx.cfg));
  std::string a, b;
  check(fw_write_spectrum(s.get(), ctx.path("spectrum", ctx.csv, ".csv", a),
                          ctx.path("spectrum", ctx.json, ".json", b), ctx.provenance.c_str()),
        "write spectrum");
  return kExitOk;
}

int cmd_cgf(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  std::vector<fw_periods> periods;
  for (const auto& item : c.list("task.n_list")) {
    const fw_periods n = parse_periods("task.n_list", item);
    if (!n.infinite && n.n < 0) throw ConfigError("key 'task.n_list': periods must be >= 0");
    if (!n.infinite) periods.push_back(n);
  }
  periods.push_back({0, 1});
  const std::vector<double> grid = s_grid(c, "linear");
  const ProtocolPtr p = make_protocol(ctx);
  const SpectrumPtr s = make_spectrum(ctx, p.get(), grid_size(c));
  for (const fw_periods& n : periods) {
    const std::string stem = n.infinite ? std::string("cgf_asymptotic") : "cgf_n" + std::to_string(n.n);
    std::string a, b;
    check(fw_write_cgf(s.get(), n, grid.data(), grid.size(), ctx.path(stem, ctx.csv, ".csv", a),
                       ctx.path(stem, ctx.json, ".json", b), ctx.provenance.c_str()),
          "write cgf");
  }
  if (c.has("task.length")) {
    std::string a, b;
    check(fw_write_cumulants(s.get(), c.integer("task.length"), ctx.path("cumulants", ctx.csv, ".csv", a),
                             ctx.path("cumulants", ctx.json, ".json", b), ctx.provenance.c_str()),
          "write cumulants");
  }
  return kExitOk;
}

int cmd_diagnose(const Context& ctx, bool case_exit_code) {
  const RunConfig& c = ctx.cfg;
  const std::vector<double> grid = s_grid(c, "log");
  const ProtocolPtr p = make_protocol(ctx);
  fw_resonance_report report{};
  check(fw_classify_resonance(p.get(), static_cast<int>(c.integer_or("task.l_max", 8)),
                              c.number_or("task.tol_res", 1e-9), c.number_or("task.tol_cdt", 1e-6), &report),
        "classify");
  const double k_max = c.number_or("task.k_max", 0.05);
  const SpectrumPtr s = make_spectrum(ctx, p.get(), grid_size(c));

  fw_diagnosis diagnosis{};
  check(fw_diagnose(s.get(), &report, grid.data(), grid.size(), k_max, &diagnosis), "diagnose");

  fw_small_k_fit fit{};
  const bool has_fit = diagnosis.singularity != FW_CASE_C;
  if (has_fit) check(fw_fit_small_k(s.get(), &report, k_max, &fit), "small-k fit");

  std::string a, b;
  if (diagnosis.singularity == FW_CASE_C) {
    if (ctx.csv) {
      std::string body = "s,value\n";
      for (double sv : grid) {
        double v = 0.0;
        check(fw_cgf_excess(s.get(), sv, 0.0, &v), "cgf excess");
        body += format_double(sv) + "," + format_double(v) + "\n";
      }
      write_text(ctx.path("excess", true, ".csv", a), body);
    }
  } else {
    const int which = diagnosis.singularity == FW_CASE_A ? 0 : 1;
    const std::string stem = which == 0 ? "diagnostic_R" : "diagnostic_R_c";
    check(fw_write_diagnostic(s.get(), which, grid.data(), grid.size(), ctx.path(stem, ctx.csv, ".csv", a),
                              ctx.path(stem, ctx.json, ".json", b)),
          "write diagnostic");
  }
  check(fw_write_report((ctx.out_dir / "report.json").string().c_str(), &report, has_fit ? &fit : nullptr,
                        &diagnosis, ctx.provenance.c_str()),
        "write report");
  static const char* labels[] = {"a", "b", "c"};
  std::cout << "case " << labels[diagnosis.singularity] << '\n';
  return case_exit_code ? kExitCaseBase + static_cast<int>(diagnosis.singularity) : kExitOk;
}

int cmd_entropy(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  if (c.text_or("protocol.kind", "sinusoidal") != "sinusoidal") {
    throw ConfigError("entropy sweeps need protocol.kind = sinusoidal");
  }
  const double h0 = c.number("protocol.h0");
  const double amplitude = c.number("protocol.amplitude");
  const double beta = c.number("task.beta");
  const long length = c.integer("task.length");
  const double lo = c.number("task.omega_min");
  const double hi = c.number("task.omega_max");
  const long n = c.integer("task.omega_points");
  if (!(beta > 0.0)) throw ConfigError("key 'task.beta' must be positive");
  if (n < 2 || !(hi > lo) || !(lo > 0.0)) throw ConfigError("invalid omega sweep (task.omega_min/max/points)");
  const int n_k = grid_size(c);
  const fw_integrator integ = make_integrator(c);
  std::vector<double> omegas(static_cast<std::size_t>(n)), entropy(omegas.size());
  for (long i = 0; i < n; ++i) omegas[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  const fw_beta b{beta, 0};
  check(fw_entropy_sweep(h0, amplitude, omegas.data(), omegas.size(), b, length, n_k, &integ, ctx.workers,
                         entropy.data()),
        "entropy sweep");
  std::string pa, pb;
  check(fw_write_entropy(h0, amplitude, omegas.data(), entropy.data(), omegas.size(), b, length, n_k, &integ,
                         ctx.path("entropy", ctx.csv, ".csv", pa), ctx.path("entropy", ctx.json, ".json", pb),
                         ctx.provenance.c_str()),
        "write entropy");
  if (ctx.csv) {
    std::string body = "kind,omega,delta_S_irr\n";
    for (std::size_t i = 1; i + 1 < entropy.size(); ++i) {
      if (entropy[i] < entropy[i - 1] && entropy[i] < entropy[i + 1]) {
        body += "min," + format_double(omegas[i]) + "," + format_double(entropy[i]) + "\n";
      } else if (entropy[i] > entropy[i - 1] && entropy[i] > entropy[i + 1]) {
        body += "max," + format_double(omegas[i]) + "," + format_double(entropy[i]) + "\n";
      }
    }
    write_text(ctx.path("entropy_extrema", true, ".csv", pa), body);
  }
  return kExitOk;
}

int cmd_workhist(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const long length = c.integer("task.length");
  const double bin_width = c.number("task.bin_width");
  const fw_periods n = parse_periods("task.periods", c.text("task.periods"));
  if (length < 2 || length % 2 != 0 || length > 20000) {
    throw ConfigError("key 'task.length' must be even and in [2, 20000]");
  }
  const ProtocolPtr p = make_protocol(ctx);
  const SpectrumPtr s = make_spectrum(ctx, p.get(), static_cast<int>(c.integer_or("grid.n_k", length / 2)));
  fw_histogram* raw = nullptr;
  check(fw_histogram_build(s.get(), n, length, bin_width, ctx.workers, &raw), "histogram");
  const HistogramPtr h(raw);
  std::string a, b;
  check(fw_write_histogram(h.get(), s.get(), ctx.path("workhist", ctx.csv, ".csv", a),
                           ctx.path("workhist", ctx.json, ".json", b), ctx.provenance.c_str()),
        "write histogram");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stroboscopic work statistics of the periodically driven transverse-field Ising chain"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  bool case_exit_code = false;
  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "run configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    return sub;
  };
  CLI::App* spectrum = add("spectrum", "per-mode energies, quasi-energies and overlaps");
  CLI::App* cgf = add("cgf", "cumulant generating function curves for a list of n");
  CLI::App* diagnose = add("diagnose", "resonance classification and edge-singularity diagnostics");
  diagnose->add_flag("--case-exit-code", case_exit_code, "exit with 10 + case index (a=0, b=1, c=2)");
  CLI::App* entropy = add("entropy", "irreversible entropy production over a frequency sweep");
  CLI::App* workhist = add("workhist", "finite-L work histogram");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    const Context ctx = make_context(config_path, out_dir);
    if (spectrum->parsed()) return cmd_spectrum(ctx);
    if (cgf->parsed()) return cmd_cgf(ctx);
    if (diagnose->parsed()) return cmd_diagnose(ctx, case_exit_code);
    if (entropy->parsed()) return cmd_entropy(ctx);
    if (workhist->parsed()) return cmd_workhist(ctx);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Failure& f) {
    std::cerr << (f.code == kExitIo ? "I/O error: " : f.code == kExitConfig ? "invalid input: " : "numerical failure: ")
              << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}
