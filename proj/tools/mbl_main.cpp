#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "mbl/adversaries.hpp"
#include "mbl/engine.hpp"
#include "mbl/errors.hpp"
#include "mbl/families.hpp"
#include "mbl/learners.hpp"
#include "mbl/oracle.hpp"
#include "mbl/verify.hpp"

using namespace mbl;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

long long to_ll(const std::string& text, const std::string& key) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw config_error(key + " wants an integer, got '" + text + "'");
  }
}

std::vector<long long> to_ll_list(const std::string& text,
                                  const std::string& key) {
  std::vector<long long> out;
  if (text.empty() || text == "none") return out;
  for (const auto& part : split(text, ',')) out.push_back(to_ll(part, key));
  return out;
}

// Family specs: threshold:<m> (spread grid), thresholds:<X>:<t1,t2,...>,
// linear:<p>:<n>[:full|:restricted], perm:<n>, avoid:<n>:<pattern>.
FunctionFamily parse_family(const std::string& spec) {
  auto parts = split(spec, ':');
  if (parts.empty()) throw config_error("empty family spec");
  const std::string& kind = parts[0];
  if (kind == "threshold" && parts.size() == 2)
    return spread_threshold_family(
               static_cast<int>(to_ll(parts[1], "family size")))
        .materialize();
  if (kind == "thresholds" && parts.size() == 3) {
    std::vector<int> t;
    for (long long v : to_ll_list(parts[2], "threshold"))
      t.push_back(static_cast<int>(v));
    return build_threshold_family(static_cast<int>(to_ll(parts[1], "domain")),
                                  t)
        .materialize();
  }
  if (kind == "linear" && (parts.size() == 3 || parts.size() == 4)) {
    bool restricted = true;
    if (parts.size() == 4) {
      if (parts[3] == "full")
        restricted = false;
      else if (parts[3] != "restricted")
        throw config_error("linear family wants 'full' or 'restricted', got '" +
                           parts[3] + "'");
    }
    return build_linear_family(static_cast<int>(to_ll(parts[1], "modulus")),
                               static_cast<int>(to_ll(parts[2], "dimension")),
                               restricted)
        .materialize();
  }
  if (kind == "perm" && parts.size() == 2)
    return build_permutation_family(static_cast<int>(to_ll(parts[1], "n")))
        .materialize();
  if (kind == "avoid" && parts.size() == 3) {
    std::vector<int> pattern;
    for (char c : parts[2]) {
      if (c < '1' || c > '9')
        throw config_error("avoid pattern wants digits, got '" + parts[2] +
                           "'");
      pattern.push_back(c - '0');
    }
    return build_avoiding_family(static_cast<int>(to_ll(parts[1], "n")),
                                 pattern)
        .materialize();
  }
  throw config_error("unknown family spec '" + spec + "'");
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool to_bool(const std::string& text, const std::string& key) {
  if (text == "1" || text == "true" || text == "yes") return true;
  if (text == "0" || text == "false" || text == "no") return false;
  throw config_error(key + " wants a boolean, got '" + text + "'");
}

// Plain key=value config file; # starts a comment. A key is skipped when the
// matching flag was given on the command line, so flags win.
using Setter = std::function<void(const std::string&)>;
void apply_config(const CLI::App* sub, const std::string& path,
                  const std::map<std::string, Setter>& setters) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw config_error("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(path + ":" + std::to_string(lineno) +
                         " wants key=value, got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end())
      throw config_error(path + ":" + std::to_string(lineno) +
                         " has unknown key '" + key + "'");
    if (sub->count("--" + key) == 0) it->second(value);
  }
}

// Component specs: name[:key=value[,key=value]...].
std::pair<std::string, std::map<std::string, std::string>> parse_component(
    const std::string& spec) {
  auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  std::map<std::string, std::string> options;
  if (colon != std::string::npos) {
    for (const auto& part : split(spec.substr(colon + 1), ',')) {
      auto eq = part.find('=');
      if (eq == std::string::npos)
        throw config_error("component option '" + part + "' wants key=value");
      options[part.substr(0, eq)] = part.substr(eq + 1);
    }
  }
  return {name, options};
}

std::unique_ptr<Learner> build_learner(const std::string& spec,
                                       const Protocol& protocol,
                                       const FunctionFamily& family,
                                       std::size_t cap) {
  auto [name, options] = parse_component(spec);
  if (!options.empty())
    throw config_error("learner '" + name + "' takes no options");
  if (name == "optimal") {
    SolveCaps caps;
    caps.max_hyps = cap;
    return std::make_unique<OptimalLearner>(protocol, family, caps);
  }
  return make_learner(name, protocol.r, family.label_count());
}

// The report rows that apply to this protocol: integer caps the learner
// side must respect, plus the insertion floor on permutations.
std::vector<BoundEntry> matching_bounds(const Protocol& protocol,
                                        const FunctionFamily& family) {
  BoundParams bp;
  bp.family_size = family.size();
  bp.r = protocol.r;
  bp.label_count = family.label_count();
  if (is_permutation_model(protocol.model)) bp.n = family.domain_size();
  auto all = bound_table(bp);
  std::vector<std::string> want;
  if (protocol.reveal) {
    want = {"eliminate_one"};
  } else {
    switch (protocol.model) {
      case Model::cart: want = {"cart_weak_cap"}; break;
      case Model::amb: want = {"amb_cap", "eliminate_one"}; break;
      case Model::order: want = {"order_cap"}; break;
      case Model::comparison: want = {"comparison_cap"}; break;
      case Model::selection: want = {"selection_cap"}; break;
      case Model::relpos:
      case Model::delayed_relpos: want = {"relpos_cap"}; break;
    }
  }
  if (is_permutation_model(protocol.model)) want.push_back("insertion_pn");
  std::vector<BoundEntry> out;
  for (const auto& name : want)
    for (const auto& e : all)
      if (e.name == name) out.push_back(e);
  if (out.empty())
    for (const auto& e : all)
      if (e.name == "eliminate_one") out.push_back(e);
  return out;
}

struct RunSpec {
  std::string model = "cart_weak";
  int r = 1;
  bool strong = false;
  std::string family = "threshold:8";
  std::string learner = "halving";
  std::string adversary = "threshold-maximin";
  std::uint64_t seed = 0;
  long long budget = 100000;
  int reps = 1;
  std::size_t cap = 12;
  std::string out;
};

int cmd_run(const RunSpec& spec) {
  Protocol protocol = parse_protocol(spec.model, spec.r, spec.strong);
  FunctionFamily family = parse_family(spec.family);
  auto bounds = matching_bounds(protocol, family);
  std::ofstream file;
  std::ostream* csv = nullptr;
  if (spec.out == "-") {
    csv = &std::cout;
  } else if (!spec.out.empty()) {
    file.open(spec.out);
    if (!file) throw config_error("cannot open output path " + spec.out);
    csv = &file;
  }
  int status = 0;
  for (int rep = 0; rep < spec.reps; ++rep) {
    auto learner = build_learner(spec.learner, protocol, family, spec.cap);
    auto [adv_name, adv_options] = parse_component(spec.adversary);
    auto adversary = make_adversary(adv_name, adv_options);
    RunOptions opts;
    opts.seed = spec.seed;
    opts.max_rounds = spec.budget;
    Transcript t = run_game(protocol, family, *learner, *adversary, opts);
    if (csv) write_transcript_csv(*csv, t);
    std::ostringstream line;
    line << "run " << protocol_name(protocol) << " family=" << spec.family
         << " hypotheses=" << family.size() << " learner=" << learner->name()
         << " adversary=" << adversary->name() << " seed=" << spec.seed
         << " mistakes=" << t.mistakes << " rounds=" << t.rounds.size()
         << " final_vss=" << t.final_version_space_size;
    long long ratio_cap = -1;
    for (const auto& e : bounds) {
      line << ' ' << e.name << '=';
      if (e.cap >= 0) {
        line << e.cap;
        if (ratio_cap < 0) ratio_cap = e.cap;
      } else {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", e.value);
        line << buf;
      }
    }
    if (ratio_cap > 0) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.3f",
                    static_cast<double>(t.mistakes) /
                        static_cast<double>(ratio_cap));
      line << " ratio=" << buf;
    } else {
      line << " ratio=-";
    }
    if (t.faulted()) {
      line << " fault=\"" << t.fault << "\"";
      status = 1;
    }
    std::cout << line.str() << '\n';
  }
  return status;
}

struct SweepSpec {
  std::string model = "cart_weak";
  std::string family_sizes = "4,8,16,32";
  std::string rs = "1";
  std::string learner;
  std::string adversary;
  std::uint64_t seed = 0;
  long long budget = 100000;
  std::size_t cap = 64;
  std::string out;
};

int cmd_sweep(const SweepSpec& spec) {
  auto sizes = to_ll_list(spec.family_sizes, "--F");
  auto rs = to_ll_list(spec.rs, "--r");
  if (sizes.size() * rs.size() > spec.cap)
    throw size_cap_error("grid has " +
                         std::to_string(sizes.size() * rs.size()) +
                         " points, cap is " + std::to_string(spec.cap));
  struct Point {
    long long F;
    int r;
    std::uint64_t seed;
  };
  std::vector<Point> grid;
  for (long long F : sizes)
    for (long long r : rs)
      grid.push_back({F, static_cast<int>(r),
                      spec.seed + static_cast<std::uint64_t>(grid.size())});
  auto row_of = [&spec](const Point& pt) {
    Protocol protocol = parse_protocol(spec.model, pt.r, false);
    if (protocol.reveal || is_permutation_model(protocol.model) ||
        protocol.model == Model::selection)
      throw config_error("sweep plays weak label protocols on threshold grids");
    FunctionFamily family =
        spread_threshold_family(static_cast<int>(pt.F)).materialize();
    std::string learner_name = spec.learner;
    if (learner_name.empty())
      learner_name = is_one_shot(protocol.model) ? "halving" : "greedy-subround";
    std::string adversary_name = spec.adversary;
    if (adversary_name.empty())
      adversary_name =
          protocol.model == Model::amb ? "amb-median" : "threshold-maximin";
    auto learner = build_learner(learner_name, protocol, family, 12);
    auto [adv_name, adv_options] = parse_component(adversary_name);
    auto adversary = make_adversary(adv_name, adv_options);
    RunOptions opts;
    opts.seed = pt.seed;
    opts.max_rounds = spec.budget;
    Transcript t = run_game(protocol, family, *learner, *adversary, opts);
    if (t.faulted())
      throw config_error("sweep point F=" + std::to_string(pt.F) +
                         " r=" + std::to_string(pt.r) + " faulted: " + t.fault);
    auto bounds = matching_bounds(protocol, family);
    long long cap = -1;
    for (const auto& e : bounds)
      if (e.cap >= 0) {
        cap = e.cap;
        break;
      }
    double ln_bound = pt.r * std::log(static_cast<double>(family.size()));
    std::ostringstream os;
    os << protocol_name(protocol) << ',' << family.size() << ',' << pt.r << ','
       << learner->name() << ',' << adversary->name() << ',' << pt.seed << ','
       << t.mistakes << ',' << t.rounds.size() << ','
       << t.final_version_space_size << ',' << cap << ',';
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", ln_bound);
    os << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.6f",
                  static_cast<double>(t.mistakes) / ln_bound);
    os << buf << '\n';
    return os.str();
  };
  // Grid points are independent; rows are assembled in grid order.
  std::vector<std::future<std::string>> futures;
  futures.reserve(grid.size());
  for (const auto& pt : grid)
    futures.push_back(
        std::async(std::launch::async, [&row_of, pt] { return row_of(pt); }));
  std::ostringstream body;
  body << "# mbl-csv v1\n";
  body << "protocol,F,r,learner,adversary,seed,mistakes,rounds,final_vss,cap,"
          "r_ln_F,ratio\n";
  for (auto& f : futures) body << f.get();
  if (spec.out.empty() || spec.out == "-") {
    std::cout << body.str();
  } else {
    std::ofstream file(spec.out);
    if (!file) throw config_error("cannot open output path " + spec.out);
    file << body.str();
  }
  return 0;
}

struct SolveSpec {
  std::string model = "standard";
  int r = 1;
  bool strong = false;
  std::string family = "threshold:4";
  bool tree = false;
  std::size_t cap = 12;
};

int cmd_solve(const SolveSpec& spec) {
  Protocol protocol = parse_protocol(spec.model, spec.r, spec.strong);
  FunctionFamily family = parse_family(spec.family);
  SolveCaps caps;
  caps.max_hyps = spec.cap;
  std::cout << exact_opt(protocol, family, caps) << '\n';
  if (spec.tree) std::cout << solve_tree(protocol, family, caps);
  return 0;
}

struct BoundsSpec {
  long long F = 8;
  int r = 1;
  int k = 2;
  long long n = 0;
  long long M = 0;
  std::string model;
  std::string out;
};

int cmd_bounds(const BoundsSpec& spec) {
  BoundParams bp;
  bp.family_size = spec.F;
  bp.r = spec.r;
  bp.label_count = spec.k;
  bp.n = spec.n;
  bp.base_mistakes = spec.M;
  auto entries = bound_table(bp);
  if (!spec.model.empty()) {
    std::vector<BoundEntry> kept;
    for (const auto& e : entries)
      if (e.name.find(spec.model) != std::string::npos) kept.push_back(e);
    entries = std::move(kept);
  }
  if (spec.out.empty() || spec.out == "-") {
    write_bound_csv(std::cout, entries);
  } else {
    std::ofstream file(spec.out);
    if (!file) throw config_error("cannot open output path " + spec.out);
    write_bound_csv(file, entries);
  }
  return 0;
}

int report(bool ok, const std::string& text) {
  std::cout << (ok ? "pass: " : "fail: ") << text << '\n';
  return ok ? 0 : 1;
}

int verify_pn(long long max_n) {
  if (max_n < 1) throw config_error("--max wants a positive integer");
  long long running = 0;
  for (long long n = 1; n <= max_n; ++n) {
    running += v_floor_log2(n);
    if (running != p_closed(n))
      return report(false, "p(n) closed form breaks at n=" + std::to_string(n));
  }
  return report(true, "p(n) closed form matches the sum for n <= " +
                          std::to_string(max_n));
}

std::vector<int> random_nonzero_vector(int p, int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coord(1, p - 1);
  std::vector<int> s(n);
  for (int& c : s) c = coord(rng);
  return s;
}

bool scalar_multiple(const std::vector<int>& s, const std::vector<int>& t,
                     int p) {
  for (int c = 1; c < p; ++c) {
    bool all = true;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (t[i] % p != (c * s[i]) % p) {
        all = false;
        break;
      }
    if (all) return true;
  }
  return false;
}

int verify_uniformity(int p, int n, int r, int draws, std::uint64_t seed,
                      bool conditional) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> label(0, p - 1);
  long long pr = 1;
  for (int i = 0; i < r; ++i) pr *= p;
  Rational target = make_rational(1, pr);
  for (int d = 0; d < draws; ++d) {
    auto s = random_nonzero_vector(p, n, rng);
    std::vector<int> z(r);
    for (int& zi : z) zi = label(rng);
    Rational got;
    if (conditional) {
      std::vector<int> t = random_nonzero_vector(p, n, rng);
      while (scalar_multiple(s, t, p)) t = random_nonzero_vector(p, n, rng);
      got = check_conditional(p, n, r, s, t, z);
    } else {
      got = check_uniformity(p, n, r, s, z);
    }
    if (!(got == target))
      return report(false, std::string(conditional ? "conditional" : "uniform") +
                               " draw " + std::to_string(d) + " gave " +
                               to_string(got) + ", wants " + to_string(target));
  }
  return report(true, std::string(conditional ? "conditional" : "uniform") +
                          " probability is 1/" + std::to_string(pr) + " on " +
                          std::to_string(draws) + " draws (p=" +
                          std::to_string(p) + ",n=" + std::to_string(n) +
                          ",r=" + std::to_string(r) + ")");
}

int verify_buckets(int p, int n, int r, std::uint64_t seed, int budget) {
  auto survivors = restricted_vectors(p, n);
  std::mt19937_64 rng(seed);
  try {
    BucketTable table = find_good_u(p, n, r, survivors, rng, budget);
    std::ostringstream os;
    os << "bucket witness has max " << table.max_count << " <= "
       << bucket_bound(static_cast<long long>(survivors.size()), p, r)
       << " over " << survivors.size() << " survivors";
    return report(true, os.str());
  } catch (const search_failure& e) {
    return report(false, std::string(e.what()) + " (best max " +
                             std::to_string(e.best.max_count) + ")");
  }
}

int verify_ceil() {
  int violations = ceil_identity_violations();
  if (violations == 0) return report(true, "ceiling identity holds on the grid");
  return report(false, std::to_string(violations) + " ceiling grid violations");
}

// Desk-sized soundness sweep: every closed-form cap must sit at or above
// the exact game value, and the insertion floor at or below it.
int verify_bounds(std::size_t cap) {
  SolveCaps caps;
  caps.max_hyps = cap;
  auto thresholds_first = [](int m) {
    std::vector<int> t;
    for (int i = 1; i <= m; ++i) t.push_back(i);
    return build_threshold_family(m, t).materialize();
  };
  auto s3 = build_permutation_family(3).materialize();
  struct Instance {
    Protocol protocol;
    FunctionFamily family;
  };
  const Instance instances[] = {
      {Protocol{Model::cart, 1, false}, thresholds_first(4)},
      {Protocol{Model::cart, 2, false}, thresholds_first(4)},
      {Protocol{Model::cart, 2, false}, thresholds_first(6)},
      {Protocol{Model::amb, 1, false}, thresholds_first(4)},
      {Protocol{Model::amb, 2, false}, thresholds_first(4)},
      {Protocol{Model::comparison, 1, false}, s3},
      {Protocol{Model::order, 2, false}, s3},
      {Protocol{Model::selection, 2, false}, s3},
      {Protocol{Model::relpos, 1, false}, s3},
      {Protocol{Model::delayed_relpos, 1, false}, s3},
  };
  int status = 0;
  for (const auto& inst : instances) {
    long long opt = exact_opt(inst.protocol, inst.family, caps);
    for (const auto& e : matching_bounds(inst.protocol, inst.family)) {
      if (e.cap < 0) continue;
      bool lower = e.name == "insertion_pn";
      bool ok = lower ? e.cap <= opt : e.cap >= opt;
      std::ostringstream os;
      os << protocol_name(inst.protocol) << " on " << inst.family.size()
         << " hypotheses: opt=" << opt << (lower ? " >= " : " <= ") << e.name
         << "=" << e.cap;
      status |= report(ok, os.str());
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mistake-bounded online learning lab"};
  app.require_subcommand(1);
  int status = 0;

  RunSpec run_spec;
  auto* run = app.add_subcommand("run", "play one game and print a summary");
  run->add_option("--model", run_spec.model,
                  "cart, cart_weak, standard, bandit, amb, order, comparison, "
                  "selection, relpos, delayed_relpos");
  run->add_option("--r", run_spec.r, "inputs per round");
  run->add_flag("--strong", run_spec.strong, "reveal feedback");
  run->add_option("--family", run_spec.family,
                  "threshold:<m>, thresholds:<X>:<list>, linear:<p>:<n>[:full],"
                  " perm:<n>, avoid:<n>:<pattern>");
  run->add_option("--learner", run_spec.learner,
                  "halving, greedy-subround, eliminate-one, random, "
                  "expert-pool, optimal");
  run->add_option("--adversary", run_spec.adversary,
                  "adversary name, options as name:key=value,...");
  run->add_option("--seed", run_spec.seed, "run seed");
  run->add_option("--budget", run_spec.budget, "round budget");
  run->add_option("--reps", run_spec.reps, "repetitions of the same run");
  run->add_option("--cap", run_spec.cap, "solver cap for the optimal learner");
  run->add_option("--out", run_spec.out, "transcript CSV path, - for stdout");
  std::string run_config;
  run->add_option("--config", run_config, "key=value file, flags win");
  run->callback([&] {
    bool seed_set = run->count("--seed") > 0;
    apply_config(
        run, run_config,
        {{"model", [&](const std::string& v) { run_spec.model = v; }},
         {"r",
          [&](const std::string& v) {
            run_spec.r = static_cast<int>(to_ll(v, "r"));
          }},
         {"strong",
          [&](const std::string& v) { run_spec.strong = to_bool(v, "strong"); }},
         {"family", [&](const std::string& v) { run_spec.family = v; }},
         {"learner", [&](const std::string& v) { run_spec.learner = v; }},
         {"adversary", [&](const std::string& v) { run_spec.adversary = v; }},
         {"seed",
          [&](const std::string& v) {
            run_spec.seed = static_cast<std::uint64_t>(to_ll(v, "seed"));
            seed_set = true;
          }},
         {"budget",
          [&](const std::string& v) { run_spec.budget = to_ll(v, "budget"); }},
         {"reps",
          [&](const std::string& v) {
            run_spec.reps = static_cast<int>(to_ll(v, "reps"));
          }},
         {"cap",
          [&](const std::string& v) {
            run_spec.cap = static_cast<std::size_t>(to_ll(v, "cap"));
          }},
         {"out", [&](const std::string& v) { run_spec.out = v; }}});
    if (!seed_set)
      throw config_error("seed is mandatory: pass --seed or a config seed=");
    status = cmd_run(run_spec);
  });

  SweepSpec sweep_spec;
  auto* sweep =
      app.add_subcommand("sweep", "grid of runs over family sizes and r");
  sweep->add_option("--model", sweep_spec.model, "weak label protocol");
  sweep->add_option("--F", sweep_spec.family_sizes,
                    "comma list of family sizes, none for an empty grid");
  sweep->add_option("--r", sweep_spec.rs, "comma list of r values");
  sweep->add_option("--learner", sweep_spec.learner, "learner name");
  sweep->add_option("--adversary", sweep_spec.adversary, "adversary name");
  sweep->add_option("--seed", sweep_spec.seed, "base seed");
  sweep->add_option("--budget", sweep_spec.budget, "round budget per point");
  sweep->add_option("--cap", sweep_spec.cap, "max grid points");
  sweep->add_option("--out", sweep_spec.out, "CSV path, - for stdout");
  std::string sweep_config;
  sweep->add_option("--config", sweep_config, "key=value file, flags win");
  sweep->callback([&] {
    bool seed_set = sweep->count("--seed") > 0;
    apply_config(
        sweep, sweep_config,
        {{"model", [&](const std::string& v) { sweep_spec.model = v; }},
         {"F", [&](const std::string& v) { sweep_spec.family_sizes = v; }},
         {"r", [&](const std::string& v) { sweep_spec.rs = v; }},
         {"learner", [&](const std::string& v) { sweep_spec.learner = v; }},
         {"adversary", [&](const std::string& v) { sweep_spec.adversary = v; }},
         {"seed",
          [&](const std::string& v) {
            sweep_spec.seed = static_cast<std::uint64_t>(to_ll(v, "seed"));
            seed_set = true;
          }},
         {"budget",
          [&](const std::string& v) { sweep_spec.budget = to_ll(v, "budget"); }},
         {"cap",
          [&](const std::string& v) {
            sweep_spec.cap = static_cast<std::size_t>(to_ll(v, "cap"));
          }},
         {"out", [&](const std::string& v) { sweep_spec.out = v; }}});
    if (!seed_set)
      throw config_error("seed is mandatory: pass --seed or a config seed=");
    status = cmd_sweep(sweep_spec);
  });

  SolveSpec solve_spec;
  auto* solve = app.add_subcommand("solve", "exact game value");
  solve->add_option("--model", solve_spec.model, "protocol model");
  solve->add_option("--r", solve_spec.r, "inputs per round");
  solve->add_flag("--strong", solve_spec.strong, "reveal feedback");
  solve->add_option("--family", solve_spec.family, "family spec");
  solve->add_flag("--tree", solve_spec.tree, "print one optimal line");
  solve->add_option("--cap", solve_spec.cap, "max hypotheses");
  std::string solve_config;
  solve->add_option("--config", solve_config, "key=value file, flags win");
  solve->callback([&] {
    apply_config(
        solve, solve_config,
        {{"model", [&](const std::string& v) { solve_spec.model = v; }},
         {"r",
          [&](const std::string& v) {
            solve_spec.r = static_cast<int>(to_ll(v, "r"));
          }},
         {"strong",
          [&](const std::string& v) { solve_spec.strong = to_bool(v, "strong"); }},
         {"family", [&](const std::string& v) { solve_spec.family = v; }},
         {"tree",
          [&](const std::string& v) { solve_spec.tree = to_bool(v, "tree"); }},
         {"cap",
          [&](const std::string& v) {
            solve_spec.cap = static_cast<std::size_t>(to_ll(v, "cap"));
          }}});
    status = cmd_solve(solve_spec);
  });

  auto* verify = app.add_subcommand("verify", "check the closed forms against brute force");
  verify->require_subcommand(1);

  long long pn_max = 1000000;
  auto* pn = verify->add_subcommand("pn", "closed form of the insertion count");
  pn->add_option("--max", pn_max, "largest n checked");
  pn->callback([&] { status = verify_pn(pn_max); });

  struct {
    int p = 3, n = 2, r = 1, draws = 50;
    std::uint64_t seed = 0;
  } uni;
  auto* uniformity =
      verify->add_subcommand("uniformity", "hash values are uniform");
  uniformity->add_option("--p", uni.p, "prime modulus");
  uniformity->add_option("--n", uni.n, "dimension");
  uniformity->add_option("--r", uni.r, "tuple length");
  uniformity->add_option("--draws", uni.draws, "seeded parameter draws");
  uniformity->add_option("--seed", uni.seed, "draw seed");
  uniformity->callback([&] {
    status = verify_uniformity(uni.p, uni.n, uni.r, uni.draws, uni.seed, false);
  });
  auto* conditional = verify->add_subcommand(
      "conditional", "independence of non-multiple directions");
  conditional->add_option("--p", uni.p, "prime modulus");
  conditional->add_option("--n", uni.n, "dimension");
  conditional->add_option("--r", uni.r, "tuple length");
  conditional->add_option("--draws", uni.draws, "seeded parameter draws");
  conditional->add_option("--seed", uni.seed, "draw seed");
  conditional->callback([&] {
    status = verify_uniformity(uni.p, uni.n, uni.r, uni.draws, uni.seed, true);
  });

  struct {
    int p = 5, n = 3, r = 1, budget = 32;
    std::uint64_t seed = 0;
  } bu;
  auto* buckets =
      verify->add_subcommand("buckets", "balanced bucket witness exists");
  buckets->add_option("--p", bu.p, "prime modulus");
  buckets->add_option("--n", bu.n, "dimension");
  buckets->add_option("--r", bu.r, "tuple length");
  buckets->add_option("--budget", bu.budget, "sampling attempts");
  buckets->add_option("--seed", bu.seed, "sampling seed");
  buckets->callback(
      [&] { status = verify_buckets(bu.p, bu.n, bu.r, bu.seed, bu.budget); });

  auto* ceil_cmd =
      verify->add_subcommand("ceil", "nested ceiling division identity");
  ceil_cmd->callback([&] { status = verify_ceil(); });

  std::size_t bounds_cap = 12;
  auto* vbounds = verify->add_subcommand(
      "bounds", "caps sit above exact values on small games");
  vbounds->add_option("--cap", bounds_cap, "max hypotheses per solve");
  vbounds->callback([&] { status = verify_bounds(bounds_cap); });

  BoundsSpec bounds_spec;
  auto* bounds = app.add_subcommand("bounds", "bound expression table");
  bounds->add_option("--F", bounds_spec.F, "family size");
  bounds->add_option("--r", bounds_spec.r, "inputs per round");
  bounds->add_option("--k", bounds_spec.k, "label count");
  bounds->add_option("--n", bounds_spec.n, "permutation ground set, 0 skips");
  bounds->add_option("--M", bounds_spec.M, "base mistake bound, 0 skips");
  bounds->add_option("--model", bounds_spec.model, "name filter");
  bounds->add_option("--out", bounds_spec.out, "CSV path, - for stdout");
  bounds->callback([&] { status = cmd_bounds(bounds_spec); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const size_cap_error& e) {
    std::cerr << "size cap: " << e.what() << '\n';
    return 3;
  } catch (const mbl_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return status;
}
