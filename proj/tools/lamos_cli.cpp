// Experiment front end: verification suites, cycle/latency reports, sweeps,
// ablation and baseline comparison tables.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lamos/lamos.hpp"

using json = nlohmann::json;
using lamos::ArchConfig;
using lamos::BarrettContext;
using lamos::BaselineSet;
using lamos::BigUint;
using lamos::GroupingMode;
using lamos::ReportRow;
using lamos::TimingMode;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;

struct Options {
  ArchConfig arch{};
  BaselineSet baselines{};
};

GroupingMode parse_grouping(const std::string& s) {
  if (s == "on") return GroupingMode::kOn;
  if (s == "off") return GroupingMode::kOff;
  if (s == "auto") return GroupingMode::kAuto;
  throw CLI::ValidationError("--grouping", "expected on|off|auto");
}

TimingMode parse_timing(const std::string& s) {
  if (s == "paper") return TimingMode::kPaperCalibrated;
  if (s == "strict") return TimingMode::kStrict;
  throw CLI::ValidationError("--timing", "expected paper|strict");
}

const char* grouping_name(bool grouped) { return grouped ? "grouped" : "naive"; }

// Key-value config file mirroring ArchConfig and the baseline constants.
// Lines look like `clock_mhz = 400`; '#' starts a comment.
void load_config(const std::string& path, Options& opt) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) continue;
    const double num = std::stod(value);
    if (key == "macro_count") opt.arch.macro_count = static_cast<unsigned>(num);
    else if (key == "rows") opt.arch.macro.rows = static_cast<unsigned>(num);
    else if (key == "cols") opt.arch.macro.cols = static_cast<unsigned>(num);
    else if (key == "limb_bits") opt.arch.macro.limb_bits = static_cast<unsigned>(num);
    else if (key == "lanes") opt.arch.macro.lanes = static_cast<unsigned>(num);
    else if (key == "tile_rows") opt.arch.tile_rows = static_cast<unsigned>(num);
    else if (key == "tile_lanes") opt.arch.tile_lanes = static_cast<unsigned>(num);
    else if (key == "overhead_cycles") opt.arch.overhead_cycles = static_cast<unsigned>(num);
    else if (key == "clock_mhz") opt.arch.clock_mhz = num;
    else if (key == "lamos_area_mm2") opt.baselines.lamos_area_mm2 = num;
    else if (key == "modsram_cycles_256") opt.baselines.modsram.cycles_256 = num;
    else if (key == "modsram_clock_mhz") opt.baselines.modsram.clock_mhz = num;
    else if (key == "modsram_area_mm2") opt.baselines.modsram.area_mm2 = num;
    else if (key == "mentt_cycles_256") opt.baselines.mentt.cycles_256 = num;
    else if (key == "mentt_clock_mhz") opt.baselines.mentt.clock_mhz = num;
    else if (key == "mentt_area_mm2") opt.baselines.mentt.area_mm2 = num;
    else if (key == "bpntt_cycles_256") opt.baselines.bpntt.cycles_256 = num;
    else if (key == "bpntt_clock_mhz") opt.baselines.bpntt.clock_mhz = num;
    else if (key == "bpntt_area_mm2") opt.baselines.bpntt.area_mm2 = num;
    else throw std::runtime_error("unknown config key: " + key);
  }
}

json report_to_json(const lamos::CycleReport& report, std::size_t n, unsigned macros) {
  return json{{"schema_version", 1},
              {"n", n},
              {"macros", macros},
              {"grouping", grouping_name(report.grouped)},
              {"timing", report.timing == TimingMode::kPaperCalibrated ? "paper" : "strict"},
              {"cycles",
               {{"mult1", report.mult1},
                {"mult2", report.mult2},
                {"mult3", report.mult3},
                {"overhead", report.overhead},
                {"total", report.total}}},
              {"latency_ns", report.latency_nanos}};
}

// ---------------------------------------------------------------------------

int cmd_simulate(std::size_t n, Options opt, const std::string& format) {
  const auto breakdown = lamos::cycles_modmul(n, opt.arch);
  lamos::CycleReport report;
  report.mult1 = breakdown.mult1;
  report.mult2 = breakdown.mult2;
  report.mult3 = breakdown.mult3;
  report.overhead = breakdown.overhead;
  report.total = breakdown.total();
  report.grouped = breakdown.grouped;
  report.timing = opt.arch.timing;
  if (opt.arch.timing == TimingMode::kStrict) {
    // Strict accounting needs the actual per-phase stream shapes.
    const std::size_t t = n / opt.arch.macro.limb_bits;
    const std::size_t t_shift = (n + 1 + opt.arch.macro.limb_bits - 1) / opt.arch.macro.limb_bits;
    const std::size_t t_mp = (n + 2 + opt.arch.macro.limb_bits - 1) / opt.arch.macro.limb_bits;
    report.mult1 = lamos::cycles_mult_rect(t, t, opt.arch);
    report.mult2 = lamos::cycles_mult_rect(t_shift, t_mp, opt.arch);
    report.mult3 = lamos::cycles_mult_rect(t, t, opt.arch);
    report.total = report.mult1 + report.mult2 + report.mult3 + report.overhead;
  }
  report.latency_nanos = lamos::latency_ns(report.total, opt.arch.clock_mhz);

  if (format == "json") {
    std::cout << report_to_json(report, n, opt.arch.macro_count).dump(2) << "\n";
  } else {
    std::printf("n: %zu  macros: %u  grouping: %s  timing: %s\n", n, opt.arch.macro_count,
                grouping_name(report.grouped),
                opt.arch.timing == TimingMode::kPaperCalibrated ? "paper" : "strict");
    std::printf("mult cycles: %llu + %llu + %llu, overhead: %llu\n",
                static_cast<unsigned long long>(report.mult1),
                static_cast<unsigned long long>(report.mult2),
                static_cast<unsigned long long>(report.mult3),
                static_cast<unsigned long long>(report.overhead));
    std::printf("total cycles: %llu\n", static_cast<unsigned long long>(report.total));
    std::printf("latency: %.1f ns @ %.0f MHz\n", report.latency_nanos, opt.arch.clock_mhz);
  }
  return kExitOk;
}

int cmd_modmul(const std::string& hex_a, const std::string& hex_b, const std::string& hex_m,
               std::size_t n, Options opt, bool trace) {
  const unsigned w = opt.arch.macro.limb_bits;
  BigUint a, b, m;
  try {
    a = BigUint::from_hex(hex_a, w);
    b = BigUint::from_hex(hex_b, w);
    m = BigUint::from_hex(hex_m, w);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (m.bit_length() != n) {
    std::cerr << "error: modulus must have top bit set (normalized " << n << "-bit value)\n";
    return kExitUsage;
  }
  if (cmp(a, m) != std::strong_ordering::less || cmp(b, m) != std::strong_ordering::less) {
    std::cerr << "error: operands must be below the modulus\n";
    return kExitUsage;
  }
  const BarrettContext ctx = lamos::precompute_context(m, n);
  const auto sim = lamos::simulate_modmul(ctx, a, b, opt.arch);

  std::string hex_r = sim.r.to_hex();
  const std::size_t digits = (n + 3) / 4;
  if (hex_r.size() < digits) hex_r.insert(0, digits - hex_r.size(), '0');
  std::cout << hex_r << "\n";

  if (trace) {
    json doc = report_to_json(sim.report, n, opt.arch.macro_count);
    doc["intermediates"] = {{"a", a.to_hex()},           {"b", b.to_hex()},
                            {"m", m.to_hex()},           {"m_prime", ctx.m_prime.to_hex()},
                            {"c", sim.trace.values.c.to_hex()}, {"u", sim.trace.values.u.to_hex()},
                            {"e", sim.trace.values.e.to_hex()}, {"p", sim.trace.values.p.to_hex()},
                            {"t", sim.trace.values.t.to_hex()}, {"r", sim.r.to_hex()}};
    doc["refine_count"] = sim.trace.values.refine_count;
    doc["mac_events"] = {sim.trace.mac_events[0], sim.trace.mac_events[1],
                         sim.trace.mac_events[2]};
    std::cout << doc.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_verify(const std::vector<std::size_t>& bits, int trials, std::uint64_t seed,
               bool quick, Options opt) {
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;

  // Exhaustive n=8 functional sweep.
  std::vector<std::uint64_t> moduli;
  if (quick) {
    moduli = {128, 251, 255};
  } else {
    for (std::uint64_t m = 128; m <= 255; ++m) moduli.push_back(m);
  }
  for (std::uint64_t m : moduli) {
    const BarrettContext ctx = lamos::precompute_context(BigUint::from_u64(m), 8);
    for (std::uint64_t a = 0; a < m; ++a) {
      const BigUint big_a = BigUint::from_u64(a);
      for (std::uint64_t b = 0; b < m; ++b) {
        const auto trace = lamos::barrett_modmul(ctx, big_a, BigUint::from_u64(b));
        ++cases;
        const std::uint64_t r = trace.r.is_zero() ? 0 : trace.r.to_u64();
        if (r != (a * b) % m || trace.refine_count > 2) {
          ++failures;
          if (failures <= 5) {
            std::printf("functional mismatch: a=%llu b=%llu m=%llu got=%llu want=%llu\n",
                        (unsigned long long)a, (unsigned long long)b, (unsigned long long)m,
                        (unsigned long long)r, (unsigned long long)((a * b) % m));
          }
        }
      }
    }
  }

  // Exhaustive w=4 datapath sweep (t <= 2).
  ArchConfig w4 = opt.arch;
  w4.macro.limb_bits = 4;
  w4.macro.lanes = w4.macro.cols / 4;
  for (std::uint64_t a = 0; a < 256; ++a) {
    for (std::uint64_t b = 0; b < 256; ++b) {
      const auto exec =
          lamos::execute_mult(BigUint::from_u64(a, 4), 2, BigUint::from_u64(b, 4), 2, w4);
      ++cases;
      if (exec.product.to_u64() != a * b) {
        ++failures;
        if (failures <= 5) {
          std::printf("datapath product mismatch: a=%llu b=%llu\n", (unsigned long long)a,
                      (unsigned long long)b);
        }
      }
    }
  }

  // Randomized oracle equivalence per bit-width, both grouping modes.
  std::mt19937_64 rng(seed);
  for (std::size_t n : bits) {
    for (int i = 0; i < trials; ++i) {
      const BigUint m = lamos::random_modulus(rng, n, opt.arch.macro.limb_bits);
      const BarrettContext ctx = lamos::precompute_context(m, n);
      const BigUint a = lamos::random_below(rng, m);
      const BigUint b = lamos::random_below(rng, m);
      const BigUint oracle = div_floor(mul_schoolbook(a, b), m).remainder;
      const auto engine = lamos::barrett_modmul(ctx, a, b);
      for (GroupingMode mode : {GroupingMode::kOff, GroupingMode::kOn}) {
        ArchConfig arch = opt.arch;
        arch.grouping = mode;
        const auto sim = lamos::simulate_modmul(ctx, a, b, arch);
        ++cases;
        if (!(sim.r == oracle && sim.r == engine.r && sim.trace.values.c == engine.c &&
              sim.trace.values.u == engine.u && sim.trace.values.e == engine.e &&
              sim.trace.values.p == engine.p && sim.trace.values.t == engine.t)) {
          ++failures;
          if (failures <= 5) {
            std::printf("simulation mismatch: n=%zu mode=%s\n  a=%s\n  b=%s\n  m=%s\n", n,
                        mode == GroupingMode::kOff ? "naive" : "grouped", a.to_hex().c_str(),
                        b.to_hex().c_str(), m.to_hex().c_str());
          }
        }
      }
    }
  }

  std::printf("%llu cases executed, %llu failures\n", (unsigned long long)cases,
              (unsigned long long)failures);
  return failures == 0 ? kExitOk : kExitVerifyFailure;
}

int cmd_ablation(const Options& opt, const std::string& format) {
  struct Row {
    std::size_t n;
    double serial_vs_parallel;
    double naive_vs_grouped;
  };
  std::vector<Row> rows;
  for (std::size_t n : {256u, 512u, 1024u}) {
    ArchConfig serial = opt.arch;
    serial.macro_count = 1;
    ArchConfig parallel = opt.arch;
    parallel.macro_count = 2;
    ArchConfig naive = parallel;
    naive.grouping = GroupingMode::kOff;
    rows.push_back({n,
                    static_cast<double>(lamos::cycles_modmul(n, serial).total()) /
                        static_cast<double>(lamos::cycles_modmul(n, parallel).total()),
                    static_cast<double>(lamos::cycles_modmul(n, naive).total()) /
                        static_cast<double>(lamos::cycles_modmul(n, parallel).total())});
  }
  if (format == "json") {
    json doc = json::array();
    for (const Row& r : rows) {
      doc.push_back({{"n", r.n},
                     {"serial_vs_parallel", r.serial_vs_parallel},
                     {"naive_vs_grouped", r.naive_vs_grouped}});
    }
    std::cout << doc.dump(2) << "\n";
  } else if (format == "csv") {
    std::printf("n,serial_vs_parallel,naive_vs_grouped\n");
    for (const Row& r : rows) {
      std::printf("%zu,%.4f,%.4f\n", r.n, r.serial_vs_parallel, r.naive_vs_grouped);
    }
  } else {
    std::printf("%-6s %-22s %-18s\n", "bits", "serial/parallel (m=1/2)", "naive/grouped (m=2)");
    for (const Row& r : rows) {
      std::printf("%-6zu %-22.3f %-18.3f\n", r.n, r.serial_vs_parallel, r.naive_vs_grouped);
    }
  }
  return kExitOk;
}

int cmd_compare(const std::vector<std::size_t>& bits, const Options& opt,
                const std::string& format) {
  std::vector<ReportRow> rows;
  for (std::size_t n : bits) {
    const double lamos_cycles = static_cast<double>(lamos::cycles_modmul(n, opt.arch).total());
    ReportRow lam = lamos::make_row("LaMoS", n, opt.arch.macro_count, lamos_cycles,
                                    opt.arch.clock_mhz, opt.baselines.lamos_area_mm2);
    ReportRow mod = lamos::make_row("ModSRAM", n, 0, opt.baselines.modsram.cycles(n),
                                    opt.baselines.modsram.clock_mhz,
                                    opt.baselines.modsram.area_mm2);
    lam.speedup = mod.lat_ns / lam.lat_ns;
    mod.speedup = 1.0;
    rows.push_back(lam);
    rows.push_back(mod);
    if (n == 256) {
      ReportRow me = lamos::make_row("MeNTT", n, 0, opt.baselines.mentt.cycles(n),
                                     opt.baselines.mentt.clock_mhz,
                                     opt.baselines.mentt.area_mm2);
      ReportRow bp = lamos::make_row("BP-NTT", n, 0, opt.baselines.bpntt.cycles(n),
                                     opt.baselines.bpntt.clock_mhz,
                                     opt.baselines.bpntt.area_mm2);
      me.speedup = mod.lat_ns / me.lat_ns;
      bp.speedup = mod.lat_ns / bp.lat_ns;
      rows.push_back(me);
      rows.push_back(bp);
    }
  }
  if (format == "json") {
    json doc = json::array();
    for (const ReportRow& r : rows) {
      doc.push_back({{"design", r.design},
                     {"n", r.n},
                     {"macros", r.macros},
                     {"cycles", r.cycles},
                     {"latency_ns", r.lat_ns},
                     {"area_mm2", r.area_mm2},
                     {"latency_area_us_mm2", r.latency_area},
                     {"speedup_vs_modsram", r.speedup}});
    }
    std::cout << doc.dump(2) << "\n";
  } else if (format == "csv") {
    std::printf("design,n,macros,cycles,latency_ns,area_mm2,latency_area_us_mm2,speedup\n");
    for (const ReportRow& r : rows) {
      std::printf("%s,%zu,%u,%.0f,%.2f,%.3f,%.4f,%.3f\n", r.design.c_str(), r.n, r.macros,
                  r.cycles, r.lat_ns, r.area_mm2, r.latency_area, r.speedup);
    }
  } else {
    std::printf("%-8s %-6s %-9s %-12s %-9s %-18s %-8s\n", "design", "bits", "cycles",
                "latency(ns)", "mm^2", "LxA(us*mm^2)", "speedup");
    for (const ReportRow& r : rows) {
      std::printf("%-8s %-6zu %-9.0f %-12.1f %-9.3f %-18.4f %-8.2f\n", r.design.c_str(), r.n,
                  r.cycles, r.lat_ns, r.area_mm2, r.latency_area, r.speedup);
    }
  }
  return kExitOk;
}

int cmd_sweep(const std::vector<std::size_t>& bits, const std::vector<unsigned>& macros,
              const Options& opt, const std::string& format) {
  json doc = json::array();
  const bool csv = format != "json";
  if (csv) std::printf("n,macros,grouping,cycles,latency_ns\n");
  for (unsigned m : macros) {
    for (std::size_t n : bits) {
      ArchConfig arch = opt.arch;
      arch.macro_count = m;
      const auto breakdown = lamos::cycles_modmul(n, arch);
      const double lat = lamos::latency_ns(breakdown.total(), arch.clock_mhz);
      if (csv) {
        std::printf("%zu,%u,%s,%llu,%.2f\n", n, m, grouping_name(breakdown.grouped),
                    (unsigned long long)breakdown.total(), lat);
      } else {
        doc.push_back({{"n", n},
                       {"macros", m},
                       {"grouping", grouping_name(breakdown.grouped)},
                       {"cycles", breakdown.total()},
                       {"latency_ns", lat}});
      }
    }
  }
  if (!csv) std::cout << doc.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LaMoS compute-in-memory modular multiplication model"};
  app.require_subcommand(1);
  app.fallthrough(true);

  Options opt;
  std::string config_path;
  if (const char* env = std::getenv("LAMOS_CONFIG")) config_path = env;
  app.add_option("--config", config_path, "key=value config file (env: LAMOS_CONFIG)");

  std::string grouping = "auto";
  std::string timing = "paper";
  std::string format = "text";
  unsigned macros = 2;
  std::size_t bits_single = 256;
  std::vector<std::size_t> bits_list{256, 512, 1024, 2048};
  std::vector<unsigned> macros_list{1, 2, 4, 8};
  int trials = 100;
  std::uint64_t seed = 1;
  bool quick = false;
  bool trace = false;
  std::string hex_a, hex_b, hex_m;

  CLI::App* verify = app.add_subcommand("verify", "run functional and datapath suites");
  verify->add_option("--bits", bits_list, "bit widths for randomized checks");
  verify->add_option("--trials", trials, "random cases per bit width");
  verify->add_option("--seed", seed, "RNG seed");
  verify->add_flag("--quick", quick, "shrink the exhaustive sweeps (smoke mode)");

  CLI::App* simulate = app.add_subcommand("simulate", "cycle/latency report for one config");
  simulate->add_option("--bits", bits_single, "operand bit width")->required();
  simulate->add_option("--macros", macros, "macro count");
  simulate->add_option("--grouping", grouping, "on|off|auto");
  simulate->add_option("--timing", timing, "paper|strict");
  simulate->add_option("--format", format, "text|json");

  CLI::App* modmul = app.add_subcommand("modmul", "simulate one modular multiplication");
  modmul->add_option("-a,--a", hex_a, "operand A (hex)")->required();
  modmul->add_option("-b,--b", hex_b, "operand B (hex)")->required();
  modmul->add_option("-m,--m", hex_m, "modulus M (hex, normalized)")->required();
  modmul->add_option("--bits", bits_single, "operand bit width")->required();
  modmul->add_option("--macros", macros, "macro count");
  modmul->add_option("--grouping", grouping, "on|off|auto");
  modmul->add_option("--timing", timing, "paper|strict");
  modmul->add_flag("--trace", trace, "dump the trace as JSON");

  CLI::App* ablation = app.add_subcommand("ablation", "serial/parallel and grouping ratios");
  ablation->add_option("--format", format, "text|csv|json");

  CLI::App* compare = app.add_subcommand("compare", "latency-area comparison table");
  compare->add_option("--bits", bits_list, "bit widths");
  compare->add_option("--macros", macros, "LaMoS macro count");
  compare->add_option("--format", format, "text|csv|json");

  CLI::App* sweep = app.add_subcommand("sweep", "cycles over the (bits, macros) grid");
  sweep->add_option("--bits", bits_list, "bit widths");
  sweep->add_option("--macros", macros_list, "macro counts");
  sweep->add_option("--format", format, "csv|json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!config_path.empty()) load_config(config_path, opt);
    // Explicit flags beat the config file; the file beats built-in defaults.
    if (simulate->count("--macros") || modmul->count("--macros") ||
        compare->count("--macros") || opt.arch.macro_count == 0) {
      opt.arch.macro_count = macros;
    }
    opt.arch.grouping = parse_grouping(grouping);
    opt.arch.timing = parse_timing(timing);
    opt.arch.validate();

    if (simulate->parsed() || modmul->parsed()) {
      if (bits_single == 0 || bits_single % opt.arch.macro.limb_bits != 0) {
        std::cerr << "error: --bits must be a positive multiple of the limb width ("
                  << opt.arch.macro.limb_bits << ")\n";
        return kExitUsage;
      }
    }

    if (verify->parsed()) return cmd_verify(bits_list, trials, seed, quick, opt);
    if (simulate->parsed()) return cmd_simulate(bits_single, opt, format);
    if (modmul->parsed()) return cmd_modmul(hex_a, hex_b, hex_m, bits_single, opt, trace);
    if (ablation->parsed()) return cmd_ablation(opt, format);
    if (compare->parsed()) return cmd_compare(bits_list, opt, format);
    if (sweep->parsed()) return cmd_sweep(bits_list, macros_list, opt, format);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerifyFailure;
  }
  return kExitUsage;
}
