// sdmaq: stability regions, feedback budgets and queue simulation for
// zero-forcing SDMA with limited feedback.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sdmaq/delay.hpp"
#include "sdmaq/error.hpp"
#include "sdmaq/report.hpp"
#include "sdmaq/sim.hpp"
#include "sdmaq/stability.hpp"

namespace {

using sdmaq::report::Json;
using sdmaq::report::format_number;

constexpr const char* kVersion = "0.3.0";

enum Exit { kOk = 0, kUsage = 2, kNumeric = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Output {
  Json json;
  Table table;
};

std::string num(double x) { return format_number(x); }

// ---------------------------------------------------------------- options

struct Globals {
  std::uint64_t seed = 1;
  std::string out;
  std::string config;
  std::string format = "json";
};

struct Physical {
  int antennas = 0;
  std::optional<double> power;
  std::optional<double> power_db;
  double threshold = 3.0;

  void add(CLI::App* app, bool with_antennas = true) {
    if (with_antennas) app->add_option("-L,--antennas", antennas, "antennas = users = queues");
    app->add_option("--power", power, "total transmit power P, linear");
    app->add_option("--power-db", power_db, "total transmit power P in dB");
    app->add_option("--threshold", threshold, "SINR threshold theta, linear")->capture_default_str();
  }

  double resolved_power() const {
    if (power.has_value() == power_db.has_value()) {
      throw UsageError("give exactly one of --power (linear) or --power-db");
    }
    return power ? *power : sdmaq::db_to_linear(*power_db);
  }

  sdmaq::SystemParams params(int L) const {
    sdmaq::SystemParams p{L, resolved_power(), threshold, std::nullopt};
    p.validate();
    return p;
  }
  sdmaq::SystemParams params() const {
    if (antennas == 0) throw UsageError("--antennas is required");
    return params(antennas);
  }
};

// Value of an option as JSON: numbers and booleans typed, lists as arrays.
Json option_value(const CLI::Option* opt) {
  std::vector<std::string> raw = opt->results();
  if (raw.empty()) {
    const auto d = opt->get_default_str();
    if (d.empty() || d == "{}" || d == "[]") return nullptr;
    if (d.front() == '[' && d.back() == ']') {
      // Vector default, rendered by CLI11 as "[a,b,c]".
      std::stringstream ss(d.substr(1, d.size() - 2));
      for (std::string item; std::getline(ss, item, ',');) raw.push_back(item);
    } else {
      raw = {d};
    }
  }
  auto typed = [](const std::string& s) -> Json {
    if (s == "true") return true;
    if (s == "false") return false;
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used == s.size()) {
        if (s.find_first_of(".eE") == std::string::npos && std::abs(v) < 9e15) {
          return static_cast<std::int64_t>(v);
        }
        return v;
      }
    } catch (const std::exception&) {
    }
    return s;
  };
  if (opt->get_expected_max() <= 1 && raw.size() == 1) return typed(raw.front());
  if (opt->get_expected_max() <= 1 && raw.empty()) return nullptr;
  Json arr = Json::array();
  for (const auto& s : raw) arr.push_back(typed(s));
  return arr;
}

Json resolved_config(const CLI::App& app, const std::vector<const CLI::App*>& chain) {
  Json cfg;
  auto collect = [&](const CLI::App* a) {
    for (const CLI::Option* opt : a->get_options()) {
      const std::string name = opt->get_single_name();
      if (name == "help" || name == "config" || name == "out" || name.empty()) continue;
      const Json v = option_value(opt);
      if (!v.is_null()) cfg[name] = v;
    }
  };
  collect(&app);
  for (const auto* a : chain) collect(a);
  return cfg;
}

// Applies a JSON config to options not given on the command line.
void apply_config(CLI::App& app, const std::vector<CLI::App*>& chain, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  Json cfg;
  try {
    cfg = Json::parse(in);
  } catch (const std::exception& e) {
    throw UsageError("config is not valid JSON: " + std::string(e.what()));
  }
  if (!cfg.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    CLI::Option* opt = nullptr;
    for (auto it = chain.rbegin(); it != chain.rend() && !opt; ++it) {
      opt = (*it)->get_option_no_throw("--" + key);
    }
    if (!opt) opt = app.get_option_no_throw("--" + key);
    if (!opt || key == "config" || key == "help") throw UsageError("unknown config key '" + key + "'");
    if (opt->count() > 0) continue;  // command line wins
    std::vector<std::string> vals;
    auto push = [&](const Json& v) {
      if (v.is_string()) {
        vals.push_back(v.get<std::string>());
      } else if (v.is_boolean() || v.is_number()) {
        vals.push_back(v.dump());
      } else {
        throw UsageError("config key '" + key + "' has an unsupported value");
      }
    };
    if (value.is_array()) {
      for (const auto& v : value) push(v);
    } else {
      push(value);
    }
    if (vals.size() > 1 && opt->get_expected_max() <= 1) {
      throw UsageError("config key '" + key + "' takes a single value");
    }
    try {
      opt->add_result(vals);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError("config key '" + key + "': " + e.what());
    }
  }
}

// ---------------------------------------------------------------- output

void write_output(const Output& out, const Globals& g, const Json& meta) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  if (g.format == "json") {
    Json doc;
    doc["meta"] = meta;
    doc["result"] = out.json;
    os << doc.dump(2) << '\n';
  } else {
    if (out.table.header.empty()) throw UsageError("this command has no CSV form; use --format json");
    os << "# tool: " << meta["tool"].get<std::string>() << ' ' << meta["version"].get<std::string>() << '\n';
    os << "# command: " << meta["command"].get<std::string>() << '\n';
    os << "# config: " << meta["config"].dump() << '\n';
    for (std::size_t i = 0; i < out.table.header.size(); ++i) {
      os << (i ? "," : "") << out.table.header[i];
    }
    os << '\n';
    for (const auto& row : out.table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << '\n';
    }
  }
  if (g.out.empty() || g.out == "-") {
    std::cout << os.str();
  } else {
    std::ofstream f(g.out, std::ios::binary | std::ios::trunc);
    if (!f) throw UsageError("cannot write " + g.out);
    f << os.str();
  }
}

// ---------------------------------------------------------------- region

struct RegionArgs {
  Physical phys;
  bool power_control = false;
  int grid = 32;
};

Output cmd_region(const RegionArgs& a) {
  const auto params = a.phys.params();
  const auto poly = sdmaq::stability_polytope(params);
  Output out;
  out.json = sdmaq::report::to_json(poly);
  const int L = params.antennas;
  out.table.header = {"kind", "k", "decision"};
  for (int l = 1; l <= L; ++l) out.table.header.push_back("lambda_" + std::to_string(l));
  for (std::size_t n = 0; n < poly.vertices.size(); ++n) {
    std::vector<std::string> row{"vertex", std::to_string(poly.vertex_decisions[n].count()),
                                 std::to_string(poly.vertex_decisions[n].mask())};
    for (double x : poly.vertices[n]) row.push_back(num(x));
    out.table.rows.push_back(std::move(row));
  }
  if (a.power_control) {
    if (a.grid < 1) throw UsageError("--grid must be >= 1");
    const auto cloud = sdmaq::power_region_sample(params, a.grid);
    Json pts = Json::array();
    for (const auto& r : cloud) {
      pts.push_back(r);
      std::uint32_t mask = 0;
      for (int l = 0; l < L; ++l) {
        if (r[static_cast<std::size_t>(l)] > 0.0) mask |= 1u << l;
      }
      std::vector<std::string> row{"power", std::to_string(std::popcount(mask)), std::to_string(mask)};
      for (double x : r) row.push_back(num(x));
      out.table.rows.push_back(std::move(row));
    }
    out.json["power_region"] = std::move(pts);
    out.json["power_region_grid"] = a.grid;
  }
  return out;
}

// ---------------------------------------------------------------- drate

struct DrateArgs {
  Physical phys;
  std::vector<int> antennas{2, 3, 4, 5};
  std::optional<int> bits;
  std::optional<double> delta;
  bool perfect = false;
  bool codebook = false;
  std::int64_t slots = 100000;
};

Output cmd_drate(const DrateArgs& a, std::uint64_t seed) {
  const int modes = (a.bits ? 1 : 0) + (a.delta ? 1 : 0) + (a.perfect ? 1 : 0);
  if (modes != 1) throw UsageError("give exactly one of --bits, --delta or --perfect");
  if (a.slots < 1) throw UsageError("--slots must be >= 1");
  Output out;
  out.table.header = {"L", "k", "bits", "d", "d_hat", "stderr", "d_ref"};
  out.json = Json::array();
  const sdmaq::RngStream root(seed);
  std::uint64_t point = 0;
  for (int L : a.antennas) {
    const auto params = a.phys.params(L);
    sdmaq::sim::CsiConfig csi;
    std::optional<int> b;
    double delta = 0.0;
    if (!a.perfect) {
      if (L < 2) throw UsageError("limited feedback needs L >= 2");
      if (a.delta) {
        b = sdmaq::feedback_bits_for_delta(params, *a.delta).bits;
        delta = *a.delta;
      } else {
        b = *a.bits;
        delta = std::max(0.0, std::min(1.0, sdmaq::delta_for_bits(params, *b)));
      }
      csi = a.codebook ? sdmaq::sim::CsiConfig::codebook(*b) : sdmaq::sim::CsiConfig::sphere_cap(*b);
    }
    for (int k = 1; k <= L; ++k) {
      sdmaq::RngStream rng = root.split(point++);
      const double d = sdmaq::departure_rate(params, k).value();
      const auto e = sdmaq::sim::estimate_departure_rate(params, k, csi, a.slots, rng);
      const double ref = (1.0 - delta) * d;
      out.table.rows.push_back({std::to_string(L), std::to_string(k), b ? std::to_string(*b) : "",
                                num(d), num(e.estimate), num(e.std_error), num(ref)});
      Json row;
      row["L"] = L;
      row["k"] = k;
      row["bits"] = b ? Json(*b) : Json(nullptr);
      row["d"] = d;
      row["d_hat"] = e.estimate;
      row["stderr"] = e.std_error;
      row["d_ref"] = ref;
      out.json.push_back(std::move(row));
    }
  }
  return out;
}

// ---------------------------------------------------------------- bits

struct BitsDeltaArgs {
  Physical phys;
  double delta = 0.1;
};

struct BitsRatioArgs {
  Physical phys;
  double ratio = 2.0;
  double tau = 0.5;
  std::string variant = "appendix";
  int bmin = 10;
  int bmax = 40;
};

struct BitsEtaArgs {
  Physical phys;
  double eta = 0.1;
};

Json inputs_of(const sdmaq::SystemParams& p) { return sdmaq::report::to_json(p); }

Output cmd_bits_delta(const BitsDeltaArgs& a) {
  const auto p = a.phys.params();
  const auto fb = sdmaq::feedback_bits_for_delta(p, a.delta);
  std::vector<std::pair<double, double>> curve;
  Output out;
  out.table.header = {"bits", "delta"};
  for (int b = std::max(1, fb.bits - 5); b <= fb.bits + 5; ++b) {
    const double d = sdmaq::delta_for_bits(p, b);
    curve.emplace_back(b, d);
    out.table.rows.push_back({std::to_string(b), num(d)});
  }
  Json in = inputs_of(p);
  in["delta"] = a.delta;
  out.json = sdmaq::report::budget_record(in, fb.bits_real, fb.bits, "rate-loss", curve);
  out.json["kappa"] = fb.kappa;
  return out;
}

double inf_or(double x) { return std::isfinite(x) ? x : std::numeric_limits<double>::infinity(); }

Output cmd_bits_ratio(const BitsRatioArgs& a) {
  const auto p = a.phys.params();
  const auto variant =
      a.variant == "proposition" ? sdmaq::DeltaVariant::kProposition : sdmaq::DeltaVariant::kAppendix;
  if (!(a.tau > 0.0 && a.tau < 1.0)) throw sdmaq::DomainError("tau must be in (0, 1)");
  if (a.bmin < 1 || a.bmax < a.bmin) throw UsageError("need 1 <= --bmin <= --bmax");
  const double delta = sdmaq::delta_for_delay_ratio(a.ratio, a.tau, variant);
  const auto fb = sdmaq::feedback_bits_for_delta(p, delta);
  const auto asym = sdmaq::bits_for_delay_ratio_asymptotic(p, a.ratio, a.tau);
  const double L1 = p.antennas - 1.0;
  const double load = L1 * std::log2((1 + a.tau) * (1 + a.tau) / a.tau);
  auto asym_ratio = [&](double b, double extra) {
    const double x = std::exp2((b - fb.kappa - extra) / L1);
    return x > 1.0 ? x / (x - 1.0) : std::numeric_limits<double>::infinity();
  };
  Output out;
  out.table.header = {"bits", "delta", "M_exact", "M_asymptotic_full", "M_asymptotic_simplified"};
  std::vector<std::pair<double, double>> bound;
  Json curve = Json::array();
  for (int b = a.bmin; b <= a.bmax; ++b) {
    const double d = sdmaq::delta_for_bits(p, b);
    double m = std::numeric_limits<double>::infinity();
    if (d > 0.0 && d < 1.0) {
      // Beyond the largest admissible loss factor the ratio is unbounded.
      try {
        m = sdmaq::delay_ratio_for_delta(d, a.tau, variant);
      } catch (const sdmaq::DomainError&) {
      }
    }
    const double full = asym_ratio(b, load);
    const double simple = asym_ratio(b, 0.0);
    bound.emplace_back(b, inf_or(m));
    out.table.rows.push_back({std::to_string(b), num(d), num(m), num(full), num(simple)});
    auto j = [](double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); };
    curve.push_back({{"bits", b}, {"delta", d}, {"M_exact", j(m)}, {"M_asymptotic_full", j(full)},
                     {"M_asymptotic_simplified", j(simple)}});
  }
  Json in = inputs_of(p);
  in["ratio"] = a.ratio;
  in["tau"] = a.tau;
  // JSON has no infinity; unbounded points are dropped from bound_curve and
  // shown as null in the curve table.
  std::vector<std::pair<double, double>> finite;
  for (const auto& pt : bound) {
    if (std::isfinite(pt.second)) finite.push_back(pt);
  }
  out.json = sdmaq::report::budget_record(in, fb.bits_real, fb.bits, a.variant, finite);
  out.json["delta"] = delta;
  out.json["kappa"] = fb.kappa;
  out.json["asymptotic_bits"] = {{"full", asym.full}, {"simplified", asym.simplified}};
  out.json["curve"] = std::move(curve);
  return out;
}

Output cmd_bits_eta(const BitsEtaArgs& a) {
  const auto p = a.phys.params();
  const auto eb = sdmaq::bits_for_eta(p, a.eta);
  Output out;
  out.table.header = {"eta", "bits_real", "bits"};
  std::vector<std::pair<double, double>> curve;
  for (int i = 0; i <= 6; ++i) {
    const double e = a.eta * std::exp2(-i);
    const auto r = sdmaq::bits_for_eta(p, e);
    curve.emplace_back(e, r.bits_real);
    out.table.rows.push_back({num(e), num(r.bits_real), std::to_string(r.bits)});
  }
  Json in = inputs_of(p);
  in["eta"] = a.eta;
  out.json = sdmaq::report::budget_record(in, eb.bits_real, eb.bits, "eta", curve);
  out.json["kappa"] = eb.kappa;
  return out;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  Physical phys;
  std::string csi = "perfect";
  std::optional<int> bits;
  std::vector<double> rate;
  std::string arrival = "poisson";
  std::string policy = "max-weight";
  std::vector<int> schedule;
  std::int64_t horizon = 100000;
  std::optional<std::int64_t> warmup;
  std::string trace;
  std::vector<double> scales;
  std::vector<int> bits_list;
  bool include_perfect = false;
  double allowance = 0.0;
};

Output cmd_simulate(const SimulateArgs& a, std::uint64_t seed) {
  const auto params = a.phys.params();
  const int L = params.antennas;
  if (a.rate.empty()) throw UsageError("--rate is required (one value or one per queue)");
  if (a.rate.size() != 1 && static_cast<int>(a.rate.size()) != L) {
    throw UsageError("--rate needs 1 or L values");
  }
  std::vector<double> rates(static_cast<std::size_t>(L), a.rate.front());
  if (a.rate.size() > 1) rates = a.rate;

  sdmaq::sim::SimConfig base;
  base.params = params;
  base.horizon = a.horizon;
  base.warmup = a.warmup;
  base.verdict_allowance = a.allowance;
  if (a.policy == "max-weight") {
    base.policy = sdmaq::sim::MaxWeightPolicy{};
  } else {
    std::vector<int> bitsv = a.schedule;
    if (bitsv.empty()) bitsv.assign(static_cast<std::size_t>(L), 1);
    if (static_cast<int>(bitsv.size()) != L) throw UsageError("--schedule needs L entries");
    base.policy = sdmaq::sim::FixedPolicy{sdmaq::DecisionVector::from_bits(bitsv)};
  }

  // CSI variants: the sweep list if given, else the single --csi setting.
  struct Variant {
    std::string name;
    sdmaq::sim::CsiConfig csi;
    std::optional<int> bits;
  };
  std::vector<Variant> variants;
  auto quantized = [&](int b) {
    return a.csi == "codebook" ? sdmaq::sim::CsiConfig::codebook(b) : sdmaq::sim::CsiConfig::sphere_cap(b);
  };
  const std::string qname = a.csi == "codebook" ? "codebook" : "sphere-cap";
  if (!a.bits_list.empty()) {
    if (a.csi == "perfect") throw UsageError("--bits-list needs --csi sphere-cap or codebook");
    for (int b : a.bits_list) variants.push_back({qname, quantized(b), b});
  } else if (a.csi == "perfect") {
    variants.push_back({"perfect", sdmaq::sim::CsiConfig::perfect(), std::nullopt});
  } else {
    if (!a.bits) throw UsageError("--bits is required with quantized CSI");
    variants.push_back({qname, quantized(*a.bits), *a.bits});
  }
  if (a.include_perfect && a.csi != "perfect") {
    variants.push_back({"perfect", sdmaq::sim::CsiConfig::perfect(), std::nullopt});
  }
  const std::vector<double> scales = a.scales.empty() ? std::vector<double>{1.0} : a.scales;
  const bool single = variants.size() == 1 && scales.size() == 1;
  if (!a.trace.empty() && !single) throw UsageError("--trace needs a single run (no sweep)");

  Output out;
  out.table.header = {"csi", "bits", "scale", "verdict", "growth", "growth_stderr", "mean_total_queue",
                      "mean_total_queue_stderr", "mean_queue_per_queue", "mean_delay", "mean_wait",
                      "packets"};
  Json runs = Json::array();
  for (const auto& v : variants) {
    for (std::size_t i = 0; i < scales.size(); ++i) {
      sdmaq::sim::SimConfig c = base;
      c.csi = v.csi;
      c.arrivals.clear();
      for (double r : rates) {
        const double lam = scales[i] * r;
        c.arrivals.push_back(a.arrival == "deterministic" ? sdmaq::sim::ArrivalProcess::deterministic(lam)
                                                          : sdmaq::sim::ArrivalProcess::poisson(lam));
      }
      // Each scale point owns its stream; CSI variants share it so curves
      // for different B see the same arrivals and channels.
      c.seed = sdmaq::derive_seed(seed, i);
      c.record_trace = !a.trace.empty();
      const auto m = sdmaq::sim::run(c);
      Json mj = sdmaq::report::to_json(m);
      Json run;
      run["csi"] = v.name;
      run["bits"] = v.bits ? Json(*v.bits) : Json(nullptr);
      run["scale"] = scales[i];
      run["rates"] = [&] {
        Json r = Json::array();
        for (const auto& ap : c.arrivals) r.push_back(ap.rate);
        return r;
      }();
      run["seed"] = c.seed;
      if (L == 1 && a.arrival == "poisson") {
        const double mu = sdmaq::departure_rate(params, 1).value();
        const double lam = c.arrivals.front().rate;
        run["pk_mean_wait"] = lam < mu ? Json(sdmaq::pk_average_delay(lam, mu)) : Json(nullptr);
      }
      run["metrics"] = mj;
      runs.push_back(std::move(run));
      out.table.rows.push_back({v.name, v.bits ? std::to_string(*v.bits) : "", num(scales[i]),
                                sdmaq::sim::to_string(m.verdict), num(m.growth), num(m.growth_stderr),
                                num(m.mean_total_queue), num(m.mean_total_queue_stderr),
                                num(m.mean_total_queue / L), num(mj["mean_delay"].get<double>()),
                                num(mj["mean_wait"].get<double>()), std::to_string(m.delays.size())});
      if (!a.trace.empty()) {
        std::ofstream f(a.trace, std::ios::binary | std::ios::trunc);
        if (!f) throw UsageError("cannot write " + a.trace);
        sdmaq::report::write_trace_csv(f, m.trace, L);
      }
    }
  }
  out.json["runs"] = std::move(runs);
  return out;
}

// ---------------------------------------------------------------- kingman

struct KingmanArgs {
  double lambda = 0.5;
  double service = 0.8;
  std::string arrival = "exponential";
  std::vector<double> sigma{0.0, 1e-1, 1e-2, 1e-3, 1e-4};
  int tmax = 30;
};

Output cmd_kingman(const KingmanArgs& a) {
  if (!(a.lambda > 0.0)) throw sdmaq::DomainError("--lambda must be > 0");
  if (a.tmax < 0) throw UsageError("--tmax must be >= 0");
  if (a.lambda >= a.service) throw sdmaq::UnstableQueue("need lambda < service");
  const sdmaq::ArrivalLaw law = a.arrival == "deterministic"
                                    ? sdmaq::ArrivalLaw{sdmaq::DeterministicArrivals{1.0 / a.lambda}}
                                    : sdmaq::ArrivalLaw{sdmaq::ExponentialArrivals{a.lambda}};
  const auto k = sdmaq::kingman_exponent(law, a.service);
  const double f = sdmaq::perturbation_coefficient(law, a.service, k.exponent);
  Output out;
  out.table.header = {"sigma", "service", "r_hat", "first_order", "error"};
  Json table = Json::array();
  for (double s : a.sigma) {
    if (!(s >= 0.0 && s < 1.0)) throw sdmaq::DomainError("sigma must be in [0, 1)");
    const double mu_hat = (1.0 - s) * a.service;
    const double r_hat = sdmaq::kingman_exponent(law, mu_hat).exponent;
    const double first = k.exponent - f * s;
    table.push_back({{"sigma", s}, {"service", mu_hat}, {"r_hat", r_hat}, {"first_order", first},
                     {"error", r_hat - first}});
    out.table.rows.push_back({num(s), num(mu_hat), num(r_hat), num(first), num(r_hat - first)});
  }
  Json curve = Json::array();
  for (int t = 0; t <= a.tmax; ++t) curve.push_back({t, std::exp(-k.exponent * t)});
  out.json["r_star"] = k.exponent;
  out.json["residual"] = k.residual;
  out.json["window_upper"] = std::isfinite(k.window_upper) ? Json(k.window_upper) : Json(nullptr);
  out.json["f"] = f;
  out.json["table"] = std::move(table);
  out.json["bound_curve"] = std::move(curve);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability, feedback budgets and delay for zero-forcing SDMA with limited feedback", "sdmaq"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  Globals g;
  app.add_option("--seed", g.seed, "base random seed");
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--config", g.config, "JSON file of option values; command-line flags win");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv"}));

  RegionArgs region;
  auto* c_region = app.add_subcommand("region", "stability polytope vertices");
  region.phys.add(c_region);
  c_region->add_flag("--power-control", region.power_control, "also sample the power-control region");
  c_region->add_option("--grid", region.grid, "power steps per scheduled queue");

  DrateArgs drate;
  auto* c_drate = app.add_subcommand("drate", "analytic vs Monte-Carlo departure rates");
  drate.phys.add(c_drate, false);
  c_drate->add_option("-L,--antennas", drate.antennas, "antenna counts")->expected(1, 8);
  c_drate->add_option("--bits", drate.bits, "feedback bits per user");
  c_drate->add_option("--delta", drate.delta, "pick bits from this rate-loss target");
  c_drate->add_flag("--perfect", drate.perfect, "perfect CSI");
  c_drate->add_flag("--codebook", drate.codebook, "random codebook instead of the sphere-cap model");
  c_drate->add_option("--slots", drate.slots, "Monte-Carlo slots per (L, k)");

  auto* c_bits = app.add_subcommand("bits", "feedback-bit budgets");
  c_bits->require_subcommand(1);
  c_bits->fallthrough();
  BitsDeltaArgs bdelta;
  auto* c_bdelta = c_bits->add_subcommand("delta", "bits for a departure-rate loss factor");
  bdelta.phys.add(c_bdelta);
  c_bdelta->add_option("--delta", bdelta.delta, "loss factor in (0, 1)");
  BitsRatioArgs bratio;
  auto* c_bratio = c_bits->add_subcommand("delay-ratio", "bits for a mean-delay ratio M");
  bratio.phys.add(c_bratio);
  c_bratio->add_option("--ratio", bratio.ratio, "delay ratio M > 1");
  c_bratio->add_option("--tau", bratio.tau, "load margin 1 - lambda/mu");
  c_bratio->add_option("--variant", bratio.variant, "loss-factor form")
      ->check(CLI::IsMember({"appendix", "proposition"}));
  c_bratio->add_option("--bmin", bratio.bmin, "curve start (bits)");
  c_bratio->add_option("--bmax", bratio.bmax, "curve end (bits)");
  BitsEtaArgs beta;
  auto* c_beta = c_bits->add_subcommand("eta", "bits for a (1 + eta) tail-bound inflation");
  beta.phys.add(c_beta);
  c_beta->add_option("--eta", beta.eta, "inflation in (0, 1)");

  SimulateArgs simulate;
  auto* c_sim = app.add_subcommand("simulate", "slotted queue simulation");
  simulate.phys.add(c_sim);
  c_sim->add_option("--csi", simulate.csi, "CSI model")
      ->check(CLI::IsMember({"perfect", "sphere-cap", "codebook"}));
  c_sim->add_option("--bits", simulate.bits, "feedback bits for quantized CSI");
  c_sim->add_option("--rate", simulate.rate, "arrival rate per queue (one value or L)")->default_str("");
  c_sim->add_option("--arrival", simulate.arrival, "arrival process")
      ->check(CLI::IsMember({"poisson", "deterministic"}));
  c_sim->add_option("--policy", simulate.policy, "control policy")
      ->check(CLI::IsMember({"max-weight", "fixed"}));
  c_sim->add_option("--schedule", simulate.schedule, "fixed decision as L bits (default all 1)")->default_str("");
  c_sim->add_option("--horizon", simulate.horizon, "slots");
  c_sim->add_option("--warmup", simulate.warmup, "warmup slots (default 10% of horizon)");
  c_sim->add_option("--trace", simulate.trace, "write the per-slot trace CSV here");
  c_sim->add_option("--scales", simulate.scales, "sweep: multiply the rates by each scale")->default_str("");
  c_sim->add_option("--bits-list", simulate.bits_list, "sweep: feedback bits")->default_str("");
  c_sim->add_flag("--include-perfect", simulate.include_perfect, "sweep: add a perfect-CSI curve");
  c_sim->add_option("--allowance", simulate.allowance, "stable verdict tolerance in growth standard errors");

  KingmanArgs kingman;
  auto* c_king = app.add_subcommand("kingman", "Kingman tail exponent and its perturbation");
  c_king->add_option("--lambda", kingman.lambda, "arrival rate");
  c_king->add_option("--service", kingman.service, "per-slot success probability");
  c_king->add_option("--arrival", kingman.arrival, "inter-arrival law")
      ->check(CLI::IsMember({"exponential", "deterministic"}));
  c_king->add_option("--sigma", kingman.sigma, "relative service losses");
  c_king->add_option("--tmax", kingman.tmax, "bound curve length (slots)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  std::vector<CLI::App*> chain;
  for (CLI::App* sub = &app; !sub->get_subcommands().empty();) {
    sub = sub->get_subcommands().front();
    chain.push_back(sub);
  }
  std::string command;
  for (const auto* c : chain) command += (command.empty() ? "" : " ") + c->get_name();

  try {
    if (!g.config.empty()) apply_config(app, chain, g.config);
    const std::vector<const CLI::App*> cchain(chain.begin(), chain.end());
    Json meta;
    meta["tool"] = "sdmaq";
    meta["version"] = kVersion;
    meta["command"] = command;
    meta["config"] = resolved_config(app, cchain);

    Output out;
    if (command == "region") {
      out = cmd_region(region);
    } else if (command == "drate") {
      out = cmd_drate(drate, g.seed);
    } else if (command == "bits delta") {
      out = cmd_bits_delta(bdelta);
    } else if (command == "bits delay-ratio") {
      out = cmd_bits_ratio(bratio);
    } else if (command == "bits eta") {
      out = cmd_bits_eta(beta);
    } else if (command == "simulate") {
      out = cmd_simulate(simulate, g.seed);
    } else if (command == "kingman") {
      out = cmd_kingman(kingman);
    } else {
      throw UsageError("unknown command " + command);
    }
    write_output(out, g, meta);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const sdmaq::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
  return kOk;
}
