#include "kdep/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <atomic>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "kdep/building.hpp"
#include "kdep/sampler.hpp"
#include "kdep/tpoly.hpp"
#include "kdep/verify.hpp"

namespace kdep::cli {
namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  int q = 0;
  int k = 0;
  int length = 100;
  int start = 0;
  std::uint64_t samples = 1'000'000;
  std::uint64_t pairs = 4'000'000;
  std::uint64_t seed = 1;
  std::string precision = "1e-30";
  std::string method = "painting";
  std::string format;
  std::string word;
  std::string t;
  int max_length = 3;
  int max_total = 4;
  int threads = 1;
  std::string out_path;
};

struct Outcome {
  json results;
  bool pass = true;
  std::optional<ColoringSample> sample;
};

json rational_json(const Rational& v) { return {{"fraction", to_fraction_string(v)}, {"decimal", to_decimal_string(v, 12)}}; }

json poly_json(const RatPoly& p) {
  json coeffs = json::array();
  for (const auto& c : p.coeffs()) coeffs.push_back(to_fraction_string(c));
  return {{"coefficients", coeffs}, {"text", p.to_string()}};
}

json root_json(const AlgebraicT& root) {
  return {{"lo", rational_json(root.lo)}, {"hi", rational_json(root.hi)}, {"width", rational_json(root.hi - root.lo)}};
}

Rational parse_precision(const std::string& text) {
  Rational p;
  try {
    p = parse_rational(text);
  } catch (const std::invalid_argument&) {
    throw UsageError("--precision: cannot parse '" + text + "'");
  }
  if (p <= 0 || p >= 1) throw UsageError("--precision: must lie in (0, 1)");
  return p;
}

void require_admissible(const RunConfig& c) {
  if (!admissible(c.q, c.k)) {
    throw UsageError("(q,k)=(" + std::to_string(c.q) + "," + std::to_string(c.k) +
                     ") is inadmissible: the coloring requires qk>2(k+1)");
  }
}

Word parse_word(const std::string& text, int q) {
  std::vector<int> chars;
  if (text.find(',') != std::string::npos) {
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
      try {
        std::size_t used = 0;
        chars.push_back(std::stoi(part, &used));
        if (used != part.size()) throw std::invalid_argument(part);
      } catch (const std::exception&) {
        throw UsageError("--word: cannot parse '" + part + "'");
      }
    }
  } else {
    for (char ch : text) {
      if (ch < '0' || ch > '9') throw UsageError(std::string("--word: unexpected character '") + ch + "'");
      chars.push_back(ch - '0');
    }
  }
  if (chars.empty()) throw UsageError("--word: empty word");
  if (chars.size() > 16) throw UsageError("--word: at most 16 characters");
  for (int x : chars) {
    if (x < 1 || x > q) throw UsageError("--word: colors must lie in [1, " + std::to_string(q) + "]");
  }
  return Word(Interval{1, static_cast<int>(chars.size())}, chars, q);
}

Outcome solve_tuning_cmd(const RunConfig& c) {
  require_admissible(c);
  const Rational precision = parse_precision(c.precision);
  const AlgebraicT root = solve_tuning(c.q, c.k, precision);
  const int digits = std::clamp(static_cast<int>(std::ceil(-std::log10(to_double(precision)))), 12, 100);
  Outcome o;
  o.results = {{"polynomial", poly_json(root.poly)},
               {"definingPolynomial", poly_json(defining_polynomial(root))},
               {"interval", root_json(root)},
               {"value", rational_json(root.midpoint())},
               {"digits", to_decimal_string(root.midpoint(), digits)}};
  return o;
}

Outcome exact_cmd(const RunConfig& c) {
  const Word w = parse_word(c.word, c.q);
  CylinderProb p;
  json t_json;
  if (!c.t.empty()) {
    Rational t;
    try {
      t = parse_rational(c.t);
    } catch (const std::invalid_argument&) {
      throw UsageError("--t: cannot parse '" + c.t + "'");
    }
    if (t <= 0 || t >= 1) throw UsageError("--t: must lie in (0, 1)");
    p = cylinder_prob(w, t);
    t_json = rational_json(t);
  } else {
    if (c.k < 1) throw UsageError("--k: required unless --t is given");
    require_admissible(c);
    const AlgebraicT root = solve_tuning(c.q, c.k, parse_precision(c.precision));
    p = cylinder_prob(w, root);
    t_json = root_json(root);
  }
  const CylinderValue v = value_at(p);
  Outcome o;
  o.results = {{"word", w.to_string()},
               {"t", t_json},
               {"numerator", poly_json(p.numerator)},
               {"denominator", poly_json(p.denominator)},
               {"reduced", poly_json(v.reduced)},
               {"exact", v.exact ? rational_json(*v.exact) : json(nullptr)},
               {"decimal", to_decimal_string(v.exact ? *v.exact : v.approx, 12)}};
  return o;
}

void write_csv(const ColoringSample& s, std::ostream& out) {
  const auto& mask = *s.endpoint_mask;
  out << "index,color" << (s.radii ? ",radius" : "") << ",endpoint\n";
  for (int i = s.window.a; i <= s.window.b; ++i) {
    const auto j = static_cast<std::size_t>(i - s.window.a);
    out << i << ',' << s.colors[j];
    if (s.radii) out << ',' << (*s.radii)[j];
    out << ',' << static_cast<int>(mask[j]) << '\n';
  }
}

Outcome sample_cmd(const RunConfig& c) {
  require_admissible(c);
  Outcome o;
  o.sample = sample_coloring(parse_method(c.method), c.q, c.k, Interval{c.start, c.start + c.length - 1}, c.seed);
  const ColoringSample& s = *o.sample;
  json endpoints = json::array();
  for (auto b : *s.endpoint_mask) endpoints.push_back(static_cast<int>(b));
  o.results = {{"window", {{"a", s.window.a}, {"b", s.window.b}}},
               {"coloring", {{"t", s.params.t}, {"s", s.params.s}, {"u", s.params.u}}},
               {"colors", s.colors},
               {"endpoints", endpoints}};
  if (s.radii) o.results["radii"] = *s.radii;
  return o;
}

json check_json(const std::string& name, std::uint64_t cases, std::uint64_t failures, std::uint64_t remainder,
                std::uint64_t enclosure) {
  return {{"name", name},
          {"pass", failures == 0},
          {"cases", cases},
          {"failures", failures},
          {"remainderRoute", remainder},
          {"enclosureRoute", enclosure}};
}

Outcome verify_exact_cmd(const RunConfig& c) {
  require_admissible(c);
  if (c.max_total < 2 || c.max_total > 6) throw UsageError("--max-total: must lie in [2, 6]");
  const AlgebraicT root = solve_tuning(c.q, c.k, parse_precision(c.precision));
  Outcome o;
  json checks = json::array();

  std::uint64_t cases = 0, failures = 0, remainder = 0, enclosure = 0;
  const auto tally = [&](const VanishingCertificate& cert) {
    ++cases;
    if (!cert.vanishes) ++failures;
    (cert.method == VanishingCertificate::Method::remainder ? remainder : enclosure) += cert.vanishes;
  };
  for (int m = 1; m < c.max_total; ++m) {
    for (int n = 1; m + n <= c.max_total; ++n) {
      for_each_word(m, c.q, [&](const Word& x) {
        for_each_word(n, c.q, [&](const Word& y) { tally(certify_vanishing(k_dependence_defect(x, y, c.q, c.k), root)); });
      });
    }
  }
  checks.push_back(check_json("k_dependence", cases, failures, remainder, enclosure));
  o.pass = failures == 0;

  cases = failures = remainder = enclosure = 0;
  for (int n = 0; n <= 8; ++n) tally(certify_vanishing(z_closed_form_defect(c.q, c.k, n), root));
  checks.push_back(check_json("normalizer_closed_form", cases, failures, remainder, enclosure));
  o.pass = o.pass && failures == 0;

  const auto found = converse_scan(c.q, root, c.k + 3);
  const bool converse_ok = found == std::vector<int>{c.k};
  checks.push_back({{"name", "converse_scan"}, {"pass", converse_ok}, {"vanishingAt", found}});
  o.pass = o.pass && converse_ok;

  o.results = {{"t", root_json(root)}, {"checks", checks}, {"pass", o.pass}};
  return o;
}

Outcome verify_stat_cmd(const RunConfig& c) {
  require_admissible(c);
  if (c.max_length < 1 || c.max_length > kMaxCylinderLength) throw UsageError("--max-length: must lie in [1, 4]");
  const Method m = parse_method(c.method);
  const ShardPlan plan{c.samples, 20000, c.seed, c.threads};
  const auto tables = sample_cylinders(m, c.q, c.k, c.max_length, independent_stride(c.max_length, c.k), plan);
  std::vector<TestReport> reports;
  for (int len = 1; len <= c.max_length; ++len) {
    reports.push_back(chi_square_against_exact(tables[static_cast<std::size_t>(len - 1)],
                                               exact_cylinder_law(c.q, c.k, len), "cylinder_law_length_" + std::to_string(len)));
  }
  const ShardPlan pair_plan{c.pairs, 20000, derive_seed(c.seed, 0x5041495253ULL), c.threads};
  for (int gap : {c.k + 1, c.k}) {
    const bool independent = gap > c.k;
    const PairTable t = sample_pairs(m, c.q, c.k, gap, gap + 1 + c.k, pair_plan);
    reports.push_back(independence_defect(t, independent ? Expectation::independent : Expectation::dependent,
                                          (independent ? "independent_at_gap_" : "dependent_at_gap_") + std::to_string(gap)));
  }
  Outcome o;
  for (const auto& r : reports) o.pass = o.pass && r.pass;
  o.results = {{"reports", reports}, {"pass", o.pass}};
  return o;
}

struct RadiusData {
  std::map<int, std::uint64_t> radius;
  std::map<int, std::uint64_t> bubble;
  std::map<int, std::uint64_t> lookback;
};

RadiusData radius_shard(int q, int k, std::uint64_t sites, std::uint64_t seed) {
  const ColoringSample s = ffiid_sample(q, k, Interval{0, static_cast<int>(sites) - 1}, seed);
  RadiusData d;
  for (int r : *s.radii) ++d.radius[r];
  for (int h : *s.lookback_hops) {
    if (h >= 0) ++d.lookback[h];
  }
  int prev = -1;
  const auto& mask = *s.endpoint_mask;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    if (prev >= 0) ++d.bubble[static_cast<int>(i) - prev];
    prev = static_cast<int>(i);
  }
  return d;
}

json histogram_json(const std::map<int, std::uint64_t>& h) {
  json a = json::array();
  for (const auto& [v, n] : h) a.push_back({v, n});
  return a;
}

Outcome radius_cmd(const RunConfig& c) {
  require_admissible(c);
  constexpr std::uint64_t kShardSites = 20000;
  const std::uint64_t shards = (c.samples + kShardSites - 1) / kShardSites;
  std::vector<RadiusData> parts(shards);
  std::atomic<std::uint64_t> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(c.threads));
  const auto worker = [&](int id) {
    try {
      for (std::uint64_t s = next++; s < shards; s = next++) {
        const std::uint64_t sites = std::min(kShardSites, c.samples - s * kShardSites);
        parts[s] = radius_shard(c.q, c.k, sites, derive_seed(c.seed, s));
      }
    } catch (...) {
      errors[static_cast<std::size_t>(id)] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < c.threads; ++i) pool.emplace_back(worker, i);
  worker(0);
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  RadiusData all;
  for (const auto& p : parts) {
    for (const auto& [v, n] : p.radius) all.radius[v] += n;
    for (const auto& [v, n] : p.bubble) all.bubble[v] += n;
    for (const auto& [v, n] : p.lookback) all.lookback[v] += n;
  }

  Outcome o;
  json fits = json::object();
  std::vector<TestReport> reports;
  const auto fit = [&](const std::string& name, const std::map<int, std::uint64_t>& h, int lo, int hi,
                       auto&& judge) {
    std::uint64_t n = 0;
    for (const auto& [v, count] : h) n += count;
    TestReport r;
    r.name = name;
    r.sample_size = n;
    try {
      const TailFit f = tail_fit(h, lo, hi);
      fits[name] = {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}, {"points", f.points}, {"range", {lo, hi}}};
      judge(f, r);
    } catch (const InsufficientData& e) {
      r.pass = false;
      r.note = e.what();
    }
    reports.push_back(r);
  };
  const auto exponential = [](const TailFit& f, TestReport& r) {
    r.statistic = f.r2;
    r.threshold = 0.95;
    r.pass = f.slope < 0 && f.r2 > 0.95;
    std::ostringstream note;
    note << "slope " << f.slope;
    r.note = note.str();
  };
  fit("radius_tail", all.radius, 5, 30, exponential);
  fit("bubble_tail", all.bubble, 5, 25, exponential);
  const double target = std::log(2.0 / c.q);
  fit("lookback_tail", all.lookback, 1, 12, [&](const TailFit& f, TestReport& r) {
    r.statistic = f.slope / target - 1;
    r.threshold = 0.1;
    r.pass = std::abs(r.statistic) <= 0.1;
    r.note = "relative slope error against log(2/q)";
  });
  for (const auto& r : reports) o.pass = o.pass && r.pass;
  o.results = {{"reports", reports},
               {"fits", fits},
               {"histograms",
                {{"radius", histogram_json(all.radius)},
                 {"bubble", histogram_json(all.bubble)},
                 {"lookback", histogram_json(all.lookback)}}},
               {"pass", o.pass}};
  return o;
}

json params_json(const RunConfig& c) {
  json p = {{"q", c.q}};
  if (c.k > 0) p["k"] = c.k;
  const auto& cmd = c.command;
  if (cmd == "solve-tuning" || cmd == "verify exact" || (cmd == "exact" && c.t.empty())) p["precision"] = c.precision;
  if (cmd == "sample") {
    p["length"] = c.length;
    p["start"] = c.start;
    p["method"] = c.method;
  }
  if (cmd == "exact") {
    p["word"] = c.word;
    if (!c.t.empty()) p["t"] = c.t;
  }
  if (cmd == "verify exact") p["maxTotal"] = c.max_total;
  if (cmd == "verify stat") {
    p["method"] = c.method;
    p["samples"] = c.samples;
    p["pairs"] = c.pairs;
    p["maxLength"] = c.max_length;
  }
  if (cmd == "radius") p["samples"] = c.samples;
  return p;
}

bool uses_seed(const std::string& command) {
  return command == "sample" || command == "verify stat" || command == "radius";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Exact and sampled k-dependent q-colorings of Z", "kdepcol"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  const auto add_qk = [&](CLI::App* sub, bool k_required) {
    sub->add_option("--q", c.q, "number of colors")->required()->check(CLI::Range(3, 64));
    auto* k = sub->add_option("--k", c.k, "dependence range")->check(CLI::Range(1, 16));
    if (k_required) k->required();
  };
  const auto add_io = [&](CLI::App* sub) {
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", c.out_path, "write output to this file");
  };
  const auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", c.seed, "64-bit seed"); };
  const auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1, 256));
  };
  const auto add_method = [&](CLI::App* sub) {
    sub->add_option("--method", c.method, "painting, lehmer or ffiid")
        ->check(CLI::IsMember({"painting", "lehmer", "ffiid"}));
  };

  auto* solve = app.add_subcommand("solve-tuning", "isolate the tuned Mallows parameter t(q,k)");
  add_qk(solve, true);
  solve->add_option("--precision", c.precision, "width of the isolating interval");
  add_io(solve);

  auto* sample = app.add_subcommand("sample", "sample a window of the coloring");
  add_qk(sample, true);
  sample->add_option("--length", c.length, "number of sites")->check(CLI::Range(1, 10'000'000));
  sample->add_option("--start", c.start, "first site index");
  add_method(sample);
  add_seed(sample);
  add_io(sample);

  auto* exact = app.add_subcommand("exact", "exact cylinder probability of a word");
  add_qk(exact, false);
  exact->add_option("--word", c.word, "colors, as digits or comma separated")->required();
  exact->add_option("--t", c.t, "rational t instead of the tuned value");
  exact->add_option("--precision", c.precision, "isolating interval width for the tuned t");
  add_io(exact);

  auto* verify = app.add_subcommand("verify", "verification suites");
  verify->require_subcommand(1);
  auto* vexact = verify->add_subcommand("exact", "certify k-dependence exactly");
  add_qk(vexact, true);
  vexact->add_option("--max-total", c.max_total, "largest |x|+|y| checked");
  vexact->add_option("--precision", c.precision, "enclosure tolerance");
  add_io(vexact);
  auto* vstat = verify->add_subcommand("stat", "statistical checks of a sampler");
  add_qk(vstat, true);
  add_method(vstat);
  vstat->add_option("--samples", c.samples, "number of strided windows")->check(CLI::PositiveNumber);
  vstat->add_option("--pairs", c.pairs, "number of pairs per independence check")->check(CLI::PositiveNumber);
  vstat->add_option("--max-length", c.max_length, "longest cylinder tested");
  add_seed(vstat);
  add_threads(vstat);
  add_io(vstat);

  auto* radius = app.add_subcommand("radius", "coding radius and bubble tails of the ffiid sampler");
  add_qk(radius, true);
  radius->add_option("--samples", c.samples, "number of sites")->check(CLI::PositiveNumber);
  add_seed(radius);
  add_threads(radius);
  add_io(radius);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  if (solve->parsed()) c.command = "solve-tuning";
  if (sample->parsed()) c.command = "sample";
  if (exact->parsed()) c.command = "exact";
  if (vexact->parsed()) c.command = "verify exact";
  if (vstat->parsed()) c.command = "verify stat";
  if (radius->parsed()) c.command = "radius";

  try {
    if (c.format.empty()) c.format = c.command == "sample" ? "csv" : "json";
    if (c.format == "csv" && c.command != "sample") throw UsageError("--format: csv is only available for sample");

    Outcome o;
    if (c.command == "solve-tuning") o = solve_tuning_cmd(c);
    if (c.command == "sample") o = sample_cmd(c);
    if (c.command == "exact") o = exact_cmd(c);
    if (c.command == "verify exact") o = verify_exact_cmd(c);
    if (c.command == "verify stat") o = verify_stat_cmd(c);
    if (c.command == "radius") o = radius_cmd(c);

    std::ofstream file;
    std::ostream* sink = &out;
    if (!c.out_path.empty()) {
      file.open(c.out_path);
      if (!file) throw UsageError("--out: cannot open " + c.out_path);
      sink = &file;
    }
    if (c.format == "csv") {
      write_csv(*o.sample, *sink);
    } else {
      json doc = {{"command", c.command},
                  {"params", params_json(c)},
                  {"seed", uses_seed(c.command) ? json(c.seed) : json(nullptr)},
                  {"results", o.results},
                  {"version", kOutputVersion}};
      *sink << doc.dump(2) << '\n';
    }
    return o.pass ? kPass : kFail;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NoSolution& e) {
    err << "error: " << e.what() << " (requires qk>2(k+1))\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFail;
  }
}

}  // namespace kdep::cli
