// coalition: command-line front end.
//
//   coalition polytope --rule borda --m 4
//   coalition gw --rule borda --m 3 --grid 0:2.5:0.05 --samples 1000000 --seed 7
//   coalition compare --rule-a plurality --rule-b borda --m 3
//   coalition exact --profile tiny.json --rule plurality
//   coalition converge --rule borda --m 3 --n-list 100,1000,10000 --trials 10000
//   coalition qvalue --rule borda --m 4 --margins 3,1
//
// Exit status: 0 success, 2 invalid input, 3 numerical failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coalition/asymptotics.hpp"
#include "coalition/election.hpp"
#include "coalition/error.hpp"
#include "coalition/io.hpp"
#include "coalition/manipulation.hpp"
#include "coalition/reduction.hpp"
#include "json.hpp"

namespace {

using namespace coalition;
using nlohmann::json;

constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

struct RunConfig {
  std::string rule;
  std::string rule_a;
  std::string rule_b;
  int m = 0;
  std::string grid = "0:3:0.05";
  std::uint64_t samples = 1'000'000;
  std::uint64_t trials = 10'000;
  std::string n_list = "100,1000,10000";
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out;
  std::string format = "csv";
  std::string profile;
  std::string margins;
  bool exact = false;
};

unsigned thread_count(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("COALITION_LP_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw Error(Errc::kParamOutOfRange, std::string("COALITION_LP_THREADS must be a positive integer, got '") + env +
                                            "'");
  }
  return resolve_threads(0);
}

// Writes to --out when given, else stdout.
void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(cfg.out);
  if (!file) throw Error(Errc::kParamOutOfRange, "cannot write '" + cfg.out + "'");
  file << text;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  return parts;
}

std::string display(const ExtRational& q, bool exact) {
  if (q.is_unreachable()) return "unreachable";
  if (exact) return to_string(q.value());
  std::ostringstream os;
  os.precision(10);
  os << to_double(q.value());
  return os.str();
}

json plan_json(const Profile& p, const CoalitionPlan& plan) {
  json recruits = json::array();
  json ballots = json::array();
  for (std::size_t t = 0; t < plan.x.size(); ++t) {
    const auto ranking = VoterType::from_index(p.m(), t).ranking();
    if (sgn(plan.x[t]) != 0) recruits.push_back({{"ranking", ranking}, {"count", to_string(plan.x[t])}});
    if (sgn(plan.y[t]) != 0) ballots.push_back({{"ranking", ranking}, {"count", to_string(plan.y[t])}});
  }
  return json{{"recruits", recruits}, {"ballots", ballots}};
}

void cmd_polytope(const RunConfig& cfg) {
  const ScoreVector w = parse_rule(cfg.rule, cfg.m);
  emit(cfg, polytope_json(w, mw_polytope(w), cfg.exact) + "\n");
}

void cmd_gw(const RunConfig& cfg) {
  const ScoreVector w = parse_rule(cfg.rule, cfg.m);
  const std::vector<double> grid = parse_grid(cfg.grid);
  const GwCurve curve = gw_curve(limit_model(w), grid, cfg.samples, cfg.seed, thread_count(cfg.threads));
  std::ostringstream os;
  if (cfg.format == "json") {
    json doc{{"rule", rule_string(w)}, {"m", w.m()},           {"seed", cfg.seed},
             {"samples", curve.samples}, {"v", curve.grid},     {"g_hat", curve.g_hat},
             {"ci_half_width", curve.half_width}, {"plateau", curve.plateau}};
    os << doc.dump() << '\n';
  } else {
    write_curve_csv(os, {rule_string(w), w.m(), cfg.seed}, curve);
  }
  emit(cfg, os.str());
}

void cmd_compare(const RunConfig& cfg) {
  const ScoreVector w1 = parse_rule(cfg.rule_a, cfg.m);
  const ScoreVector w2 = parse_rule(cfg.rule_b, cfg.m);
  const std::vector<double> grid = parse_grid(cfg.grid);
  DominanceOptions options;
  options.samples = cfg.samples;
  options.seed = cfg.seed;
  options.threads = thread_count(cfg.threads);
  const DominanceReport r = dominates(w1, w2, grid, options);
  const std::string a = rule_string(w1);
  const std::string b = rule_string(w2);
  std::string sentence;
  switch (r.verdict) {
    case Verdict::kDominates: sentence = a + " dominates " + b; break;
    case Verdict::kDominatedBy: sentence = a + " dominated by " + b; break;
    case Verdict::kIncomparable: sentence = a + " and " + b + " incomparable"; break;
    case Verdict::kIndistinguishable: sentence = a + " and " + b + " indistinguishable"; break;
  }
  std::ostringstream os;
  if (cfg.format == "json") {
    json doc{{"rule_a", a}, {"rule_b", b}, {"m", cfg.m}, {"verdict", to_string(r.verdict)}, {"analytic", r.analytic}};
    if (r.c1_squared) doc["c_a_squared"] = to_string(*r.c1_squared);
    if (r.c2_squared) doc["c_b_squared"] = to_string(*r.c2_squared);
    os << doc.dump() << '\n';
  } else {
    os << sentence;
    if (r.analytic) {
      os << " (exact: c^2 = " << to_string(*r.c1_squared) << " vs " << to_string(*r.c2_squared) << ")";
    } else {
      os << " (sampled: " << cfg.samples << " paired draws, seed " << cfg.seed << ")";
    }
    os << '\n';
  }
  emit(cfg, os.str());
}

void cmd_exact(const RunConfig& cfg) {
  const Profile p = load_profile(cfg.profile);
  if (cfg.m > 0 && cfg.m != p.m()) throw Error(Errc::kDimensionMismatch, "--m disagrees with the profile");
  const ScoreVector w = parse_rule(cfg.rule, p.m());
  const McsResult r = mcs_exact(p, w);
  const Scoreboard board(p, w);
  json doc;
  doc["rule"] = rule_string(w);
  doc["m"] = p.m();
  doc["n"] = p.n();
  doc["mcs"] = r.size.is_finite() ? json(r.size.value()) : json("unreachable");
  if (r.target) doc["target"] = *r.target;
  if (r.plan) doc["witness"] = plan_json(p, *r.plan);
  doc["q_adjacent"] = display(q_adjacent(board, w), true);
  doc["q_dual"] = display(q_dual(margins_of(board), mw_polytope(w)).value, true);
  doc["k_constant"] = to_string(k_constant(w));
  emit(cfg, doc.dump() + "\n");
}

void cmd_converge(const RunConfig& cfg) {
  const ScoreVector w = parse_rule(cfg.rule, cfg.m);
  std::vector<std::int64_t> ns;
  for (const auto& item : split_list(cfg.n_list)) {
    try {
      ns.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw Error(Errc::kMalformedInput, "bad --n-list entry '" + item + "'");
    }
  }
  ConvergenceOptions options;
  options.limit_samples = cfg.samples;
  options.threads = thread_count(cfg.threads);
  const auto rows = convergence_experiment(w, ns, cfg.trials, cfg.seed, options);
  std::ostringstream os;
  write_convergence_csv(os, {rule_string(w), w.m(), cfg.seed}, rows);
  emit(cfg, os.str());
}

void cmd_qvalue(const RunConfig& cfg) {
  const ScoreVector w = parse_rule(cfg.rule, cfg.m);
  const auto parts = split_list(cfg.margins);
  if (parts.size() != 2) throw Error(Errc::kMalformedInput, "--margins expects a_margin,b_deficit");
  Rational a;
  Rational b;
  try {
    a = parse_rational(parts[0]);
    b = parse_rational(parts[1]);
  } catch (const std::invalid_argument& e) {
    throw Error(Errc::kMalformedInput, std::string("bad margin: ") + e.what());
  }
  const MarginPair margins = make_margins(a, b, w.m());
  const Polytope2D poly = mw_polytope(w);
  const DualOptimum q = q_dual(margins, poly);
  std::ostringstream os;
  if (cfg.format == "json") {
    json optimal = json::array();
    for (std::size_t i : q.argmax) {
      optimal.push_back({to_string(poly.vertices[i].lambda), to_string(poly.vertices[i].mu)});
    }
    json doc{{"rule", rule_string(w)},
             {"m", w.m()},
             {"q", display(q.value, cfg.exact)},
             {"scoreboard_valid", margins.scoreboard_valid},
             {"optimal_vertices", optimal}};
    os << doc.dump() << '\n';
  } else {
    os << display(q.value, cfg.exact) << '\n';
  }
  emit(cfg, os.str());
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::kNumericalFailure:
    case Errc::kStatusMismatch:
    case Errc::kConstructionFailed: return kExitNumerical;
    default: return kExitInvalid;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum manipulating coalition sizes of positional voting rules"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "Worker threads (default: COALITION_LP_THREADS or all cores)");
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "Output file (default: stdout)");
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* polytope = app.add_subcommand("polytope", "Vertices and rays of the dual constraint set");
  polytope->add_option("--rule", cfg.rule, "Rule string")->required();
  polytope->add_option("--m", cfg.m, "Candidate count");
  polytope->add_flag("--exact", cfg.exact, "Print exact rationals");
  polytope->add_option("--out", cfg.out, "Output file");

  auto* gw = app.add_subcommand("gw", "Monte Carlo estimate of the limiting curve g_w(v)");
  gw->add_option("--rule", cfg.rule, "Rule string")->required();
  gw->add_option("--m", cfg.m, "Candidate count");
  gw->add_option("--grid", cfg.grid, "start:stop:step")->capture_default_str();
  gw->add_option("--samples", cfg.samples, "Monte Carlo samples")->capture_default_str();
  add_seed(gw);
  add_output(gw);

  auto* compare = app.add_subcommand("compare", "Dominance between two rules");
  compare->add_option("--rule-a", cfg.rule_a, "First rule")->required();
  compare->add_option("--rule-b", cfg.rule_b, "Second rule")->required();
  compare->add_option("--m", cfg.m, "Candidate count")->required();
  compare->add_option("--grid", cfg.grid, "start:stop:step")->capture_default_str();
  compare->add_option("--samples", cfg.samples, "Paired samples when no exact comparison exists")
      ->capture_default_str();
  add_seed(compare);
  add_output(compare);

  auto* exact = app.add_subcommand("exact", "Exact minimum coalition for a profile file");
  exact->add_option("--profile", cfg.profile, "Profile JSON")->required()->check(CLI::ExistingFile);
  exact->add_option("--rule", cfg.rule, "Rule string")->required();
  exact->add_option("--m", cfg.m, "Candidate count (defaults to the profile's)");
  exact->add_option("--out", cfg.out, "Output file");

  auto* converge = app.add_subcommand("converge", "KS distance of finite-n coalition sizes to the limit law");
  converge->add_option("--rule", cfg.rule, "Rule string")->required();
  converge->add_option("--m", cfg.m, "Candidate count");
  converge->add_option("--n-list", cfg.n_list, "Comma-separated voter counts")->capture_default_str();
  converge->add_option("--trials", cfg.trials, "Profiles per n")->capture_default_str();
  converge->add_option("--samples", cfg.samples, "Limit-law samples")->capture_default_str();
  add_seed(converge);
  converge->add_option("--out", cfg.out, "Output file");

  auto* qvalue = app.add_subcommand("qvalue", "Dual optimum for given margins");
  qvalue->add_option("--rule", cfg.rule, "Rule string")->required();
  qvalue->add_option("--m", cfg.m, "Candidate count");
  qvalue->add_option("--margins", cfg.margins, "a_margin,b_deficit")->required();
  qvalue->add_flag("--exact", cfg.exact, "Print exact rationals");
  add_output(qvalue);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*polytope) cmd_polytope(cfg);
    if (*gw) cmd_gw(cfg);
    if (*compare) cmd_compare(cfg);
    if (*exact) cmd_exact(cfg);
    if (*converge) cmd_converge(cfg);
    if (*qvalue) cmd_qvalue(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return 0;
}
