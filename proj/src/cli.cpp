#include "lamqed/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lamqed/entanglement.hpp"

namespace lamqed {

namespace {

double parse_double(const std::string& flag, const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value))
    throw UsageError("invalid number for " + flag + ": '" + text + "'");
  return value;
}

int parse_int(const std::string& flag, const std::string& text) {
  int value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    throw UsageError("invalid integer for " + flag + ": '" + text + "'");
  return value;
}

std::vector<std::pair<std::string, RunConfig>> build_presets() {
  struct Fig {
    int index;
    double d1, d2;
  };
  // fig2 uses delta1 = delta2 = 10 as the representative equal-detuning
  // run; override with --delta1/--delta2 for other values.
  const Fig figs[] = {{1, 0.0, 0.0}, {2, 10.0, 10.0}, {3, 0.0, 100.0}, {4, 5.0, 4.0}};
  const std::pair<char, std::optional<int>> variants[] = {
      {'a', std::nullopt}, {'b', std::nullopt}, {'c', 1}, {'d', 1}, {'e', 3}, {'f', 3}};

  std::vector<std::pair<std::string, RunConfig>> table;
  table.reserve(24);
  for (const Fig& fig : figs) {
    for (const auto& [letter, p] : variants) {
      RunConfig rc;
      rc.preset = "fig" + std::to_string(fig.index) + letter;
      rc.delta1 = fig.d1;
      rc.delta2 = fig.d2;
      rc.p = p;
      rc.nbar = 25.0;
      table.emplace_back(*rc.preset, rc);
    }
  }
  return table;
}

const RunConfig* find_preset(const std::string& name) {
  for (const auto& [key, rc] : preset_table())
    if (key == name) return &rc;
  return nullptr;
}

void write_csv(const RunConfig& rc, const TimeSeries& series) {
  std::ofstream out(rc.out_path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open output file '" + rc.out_path + "'");

  out << "t,scaled_time,entropy,rho11,rho22,rho33,solver_path\n";
  const std::string_view path = to_string(series.path);
  char buf[160];
  for (const TimeSeriesSample& s : series.samples) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g",
                  s.t, s.scaled_time, s.entropy, s.rho11, s.rho22, s.rho33);
    out << buf << ',' << path << '\n';
  }
  if (!out.flush())
    throw std::runtime_error("write failure on '" + rc.out_path + "'");
}

}  // namespace

const std::vector<std::pair<std::string, RunConfig>>& preset_table() {
  static const auto table = build_presets();
  return table;
}

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig rc;
  std::optional<std::string> preset_name;

  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string flag = args[i];
    std::optional<std::string> inline_value;
    if (const auto eq = flag.find('='); eq != std::string::npos && flag.rfind("--", 0) == 0) {
      inline_value = flag.substr(eq + 1);
      flag = flag.substr(0, eq);
    }
    auto value = [&]() -> std::string {
      if (inline_value) return *inline_value;
      if (++i >= args.size()) throw UsageError("missing value for " + flag);
      return args[i];
    };

    if (flag == "--help" || flag == "-h") {
      rc.help = true;
    } else if (flag == "--preset") {
      preset_name = value();
    } else if (flag == "--delta1") {
      rc.delta1 = parse_double(flag, value());
    } else if (flag == "--delta2") {
      rc.delta2 = parse_double(flag, value());
    } else if (flag == "--p") {
      const int p = parse_int(flag, value());
      if (p < 1) throw UsageError("--p must be >= 1");
      rc.p = p;
    } else if (flag == "--nbar") {
      rc.nbar = parse_double(flag, value());
      if (rc.nbar < 0) throw UsageError("--nbar must be >= 0");
    } else if (flag == "--tmax") {
      rc.t_max = parse_double(flag, value());
      if (!(rc.t_max > 0)) throw UsageError("--tmax must be > 0");
    } else if (flag == "--samples") {
      rc.samples = parse_int(flag, value());
      if (rc.samples < 2) throw UsageError("--samples must be >= 2");
    } else if (flag == "--out") {
      rc.out_path = value();
    } else if (flag == "--format") {
      rc.format = value();
      if (rc.format != "csv") throw UsageError("unsupported --format '" + rc.format + "' (only csv)");
    } else {
      throw UsageError("unknown flag '" + flag + "'");
    }
  }

  if (preset_name) {
    const RunConfig* preset = find_preset(*preset_name);
    if (!preset) throw UsageError("unknown preset '" + *preset_name + "' (see --help)");
    // The preset pins the physics; output and sampling flags still apply.
    rc.preset = preset->preset;
    rc.delta1 = preset->delta1;
    rc.delta2 = preset->delta2;
    rc.p = preset->p;
    rc.nbar = preset->nbar;
  }
  if (!rc.help && rc.out_path.empty())
    throw UsageError("--out is required");
  return rc;
}

int run(const RunConfig& rc) {
  ModelConfig mc;
  mc.lambda1 = 1.0;
  mc.lambda2 = 1.0;
  mc.delta1 = rc.delta1;
  mc.delta2 = rc.delta2;
  if (rc.p) mc.motion = Motion{*rc.p};
  mc.nbar = rc.nbar;
  mc.n_max = default_n_max(rc.nbar);

  std::vector<double> grid(rc.samples);
  for (int i = 0; i < rc.samples; ++i)
    grid[i] = rc.t_max * i / (rc.samples - 1);

  const TimeSeries series = entropy_series(mc, grid);
  write_csv(rc, series);
  return 0;
}

void print_usage(std::ostream& os) {
  os << "usage: lamqed [--preset NAME | --delta1 X --delta2 X [--p N]]\n"
        "              [--nbar X] [--tmax X] [--samples N] --out FILE\n"
        "              [--format csv]\n"
        "\n"
        "Time evolution of a three-level lambda atom in a single-mode\n"
        "cavity: von Neumann entropy and level populations, written as CSV\n"
        "(columns t,scaled_time,entropy,rho11,rho22,rho33,solver_path).\n"
        "\n"
        "defaults: nbar 25, tmax 50, samples 2000, stationary atom\n"
        "\n"
        "presets (all nbar = 25, lambda1 = lambda2 = 1):\n";
  for (const auto& [name, rc] : preset_table()) {
    const std::string motion = rc.p ? "p=" + std::to_string(*rc.p) : "stationary";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "  %-6s delta1=%-5g delta2=%-5g %s\n",
                  name.c_str(), rc.delta1, rc.delta2, motion.c_str());
    os << buf;
  }
}

int cli_main(const std::vector<std::string>& args) {
  try {
    const RunConfig rc = parse_args(args);
    if (rc.help) {
      print_usage(std::cout);
      return 0;
    }
    return run(rc);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    print_usage(std::cerr);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace lamqed
