#include "mbl/oracle.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <unordered_map>

#include "mbl/errors.hpp"

namespace mbl {

namespace {

using Bits = std::uint64_t;

int count(Bits v) { return std::popcount(v); }

class Solver {
 public:
  Solver(const Protocol& protocol, const FunctionFamily& family,
         const SolveCaps& caps)
      : protocol_(protocol), family_(family), caps_(caps) {
    validate_protocol(protocol_);
    if (protocol_.model == Model::delayed_relpos && protocol_.r != 1)
      throw config_error("the delayed rank game is solved at r=1 only");
    if (is_permutation_model(protocol_.model) &&
        !family_.rows_are_permutations())
      throw config_error(protocol_name(protocol_) +
                         " needs a family of permutations");
    if (family_.size() > 64)
      throw size_cap_error("solver encodes at most 64 hypotheses");
    if (static_cast<std::size_t>(family_.size()) > caps_.max_hyps)
      throw size_cap_error("family exceeds max_hyps (" +
                           std::to_string(caps_.max_hyps) + ")");
    if (protocol_.model == Model::amb) {
      if (static_cast<std::size_t>(family_.domain_size()) > caps_.max_queries)
        throw size_cap_error("domain exceeds max_queries for subround play");
    } else {
      build_queries();
    }
  }

  Bits full() const {
    std::size_t n = family_.size();
    return n == 64 ? ~Bits{0} : (Bits{1} << n) - 1;
  }

  long long value(Bits V) {
    if (count(V) <= 1) return 0;
    auto it = memo_.find(V);
    if (it != memo_.end()) return it->second;
    long long v =
        protocol_.model == Model::amb ? amb_value(V) : one_shot_value(V);
    memo_.emplace(V, v);
    return v;
  }

  std::map<std::vector<int>, Bits> partition(Bits V, const Query& q) const {
    std::map<std::vector<int>, Bits> parts;
    for (int h = 0; h < static_cast<int>(family_.size()); ++h)
      if (V >> h & 1)
        parts[answer_of(protocol_, family_, h, q)] |= Bits{1} << h;
    return parts;
  }

  // Learner's best response to one concrete query; ties break toward the
  // smallest answer so play is deterministic.
  std::vector<int> best_response(Bits V, const Query& q) {
    auto parts = partition(V, q);
    if (parts.size() == 1) return parts.begin()->first;
    std::vector<int> best;
    long long best_cost = LLONG_MAX;
    for (const auto& [g, Vg] : parts) {
      long long cost;
      if (protocol_.reveal) {
        cost = 0;
        for (const auto& [a, Va] : parts)
          cost = std::max(cost, (a != g ? 1 : 0) + value(Va));
      } else {
        cost = std::max(value(Vg), 1 + value(V & ~Vg));
      }
      if (cost < best_cost) {
        best_cost = cost;
        best = g;
      }
    }
    return best;
  }

  // Best label for an amb subround given the prefix already answered.
  int best_label(Bits V, Bits prefix, int x, int depth) {
    std::map<int, Bits> classes = label_classes(prefix, x);
    int best = classes.begin()->first;
    if (classes.size() == 1) return best;
    long long best_cost = LLONG_MAX;
    for (const auto& [label, next] : classes) {
      auto child = amb_sub(V, next, depth + 1);
      // next is a proper nonempty subset of V, so the line has a value.
      if (child && *child < best_cost) {
        best_cost = *child;
        best = label;
      }
    }
    return best;
  }

  long long worst_case(Learner& learner) {
    learner_ = &learner;
    wc_memo_.clear();
    Bits V = full();
    long long v =
        protocol_.model == Model::amb ? wc_amb(V) : wc_one_shot(V);
    learner_ = nullptr;
    return v;
  }

  std::string tree() {
    if (!is_one_shot(protocol_.model))
      throw config_error("tree rendering covers one-shot protocols");
    std::ostringstream os;
    render(full(), 0, os);
    return os.str();
  }

  const Protocol& protocol() const { return protocol_; }
  const FunctionFamily& family() const { return family_; }

  Bits bits_of(const std::vector<int>& hyps) const {
    Bits V = 0;
    for (int h : hyps) {
      if (h < 0 || h >= static_cast<int>(family_.size()))
        throw precondition_error("version space index out of range");
      V |= Bits{1} << h;
    }
    return V;
  }

  // Survivors of V matching the labels given so far in this round.
  Bits amb_prefix(Bits V, const Query& partial,
                  const std::vector<int>& labels) const {
    Bits P = V;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      Bits next = 0;
      for (int h = 0; h < static_cast<int>(family_.size()); ++h)
        if ((P >> h & 1) && family_.eval(h, partial.inputs[i]) == labels[i])
          next |= Bits{1} << h;
      P = next;
    }
    return P;
  }

  std::optional<long long> amb_sub(Bits V, Bits prefix, int depth) {
    if (depth == protocol_.r) {
      if (prefix == V) return std::nullopt;  // round changed nothing
      if (prefix == 0) return std::nullopt;
      return std::max(value(prefix), 1 + value(V & ~prefix));
    }
    auto key = std::make_tuple(V, prefix, depth);
    auto it = amb_memo_.find(key);
    if (it != amb_memo_.end()) return it->second;
    std::optional<long long> best;
    for (int x = 1; x <= family_.domain_size(); ++x) {
      auto classes = label_classes(prefix, x);
      std::optional<long long> line;
      if (classes.size() == 1) {
        line = amb_sub(V, prefix, depth + 1);
      } else {
        long long lmin = LLONG_MAX;
        for (const auto& [label, next] : classes) {
          auto child = amb_sub(V, next, depth + 1);
          if (child) lmin = std::min(lmin, *child);
        }
        if (lmin != LLONG_MAX) line = lmin;
      }
      if (line) best = std::max(best.value_or(0), *line);
    }
    amb_memo_.emplace(key, best);
    return best;
  }

 private:
  void push_query(Query q) {
    queries_.push_back(std::move(q));
    if (queries_.size() > caps_.max_queries)
      throw size_cap_error("query space exceeds max_queries (" +
                           std::to_string(caps_.max_queries) + ")");
  }

  void build_queries() {
    const int X = static_cast<int>(family_.domain_size());
    const int r = protocol_.r;
    std::vector<int> t;
    switch (protocol_.model) {
      case Model::cart: {
        // Input order is interchangeable; non-decreasing tuples suffice.
        std::function<void(int)> rec = [&](int start) {
          if (static_cast<int>(t.size()) == r) {
            Query q;
            q.inputs = t;
            push_query(std::move(q));
            return;
          }
          for (int x = start; x <= X; ++x) {
            t.push_back(x);
            rec(x);
            t.pop_back();
          }
        };
        rec(1);
        break;
      }
      case Model::order: {
        std::function<void(int)> rec = [&](int start) {
          if (static_cast<int>(t.size()) == r) {
            Query q;
            q.inputs = t;
            push_query(std::move(q));
            return;
          }
          for (int x = start; x <= X; ++x) {
            t.push_back(x);
            rec(x + 1);
            t.pop_back();
          }
        };
        rec(1);
        break;
      }
      case Model::comparison: {
        std::vector<std::pair<int, int>> pairs;
        for (int a = 1; a <= X; ++a)
          for (int b = a + 1; b <= X; ++b) pairs.emplace_back(a, b);
        std::vector<std::pair<int, int>> chosen;
        std::function<void(std::size_t)> rec = [&](std::size_t start) {
          if (static_cast<int>(chosen.size()) == r) {
            Query q;
            q.pairs = chosen;
            push_query(std::move(q));
            return;
          }
          for (std::size_t i = start; i < pairs.size(); ++i) {
            chosen.push_back(pairs[i]);
            rec(i);
            chosen.pop_back();
          }
        };
        rec(0);
        break;
      }
      case Model::selection: {
        // Subsets of 2..r inputs; smaller sets are padded with repeats the
        // way the engine accepts them.
        for (int s = 2; s <= std::min(r, X); ++s) {
          std::function<void(int)> rec = [&](int start) {
            if (static_cast<int>(t.size()) == s) {
              Query q;
              q.inputs = t;
              while (static_cast<int>(q.inputs.size()) < r)
                q.inputs.push_back(t.front());
              push_query(std::move(q));
              return;
            }
            for (int x = start; x <= X; ++x) {
              t.push_back(x);
              rec(x + 1);
              t.pop_back();
            }
          };
          rec(1);
        }
        break;
      }
      case Model::relpos:
      case Model::delayed_relpos: {
        for (int x = 1; x <= X; ++x) {
          std::function<void(int)> rec = [&](int start) {
            if (static_cast<int>(t.size()) == r) {
              Query q;
              q.inputs.push_back(x);
              q.inputs.insert(q.inputs.end(), t.begin(), t.end());
              push_query(std::move(q));
              return;
            }
            for (int e = start; e <= X; ++e) {
              if (e == x) continue;
              t.push_back(e);
              rec(e + 1);
              t.pop_back();
            }
          };
          rec(1);
        }
        break;
      }
      case Model::amb:
        break;
    }
  }

  std::map<int, Bits> label_classes(Bits P, int x) const {
    std::map<int, Bits> classes;
    for (int h = 0; h < static_cast<int>(family_.size()); ++h)
      if (P >> h & 1) classes[family_.eval(h, x)] |= Bits{1} << h;
    return classes;
  }

  long long one_shot_value(Bits V) {
    long long best_adv = 0;
    for (const Query& q : queries_) {
      auto parts = partition(V, q);
      if (parts.size() < 2) continue;
      long long best_l = LLONG_MAX;
      for (const auto& [g, Vg] : parts) {
        long long cost;
        if (protocol_.reveal) {
          cost = 0;
          for (const auto& [a, Va] : parts)
            cost = std::max(cost, (a != g ? 1 : 0) + value(Va));
        } else {
          cost = std::max(value(Vg), 1 + value(V & ~Vg));
        }
        best_l = std::min(best_l, cost);
      }
      best_adv = std::max(best_adv, best_l);
    }
    return best_adv;
  }

  long long amb_value(Bits V) {
    auto line = amb_sub(V, V, 0);
    // Distinct rows guarantee a splitting input, so a line always exists.
    return line ? *line : 0;
  }

  std::vector<int> to_vector(Bits V) const {
    std::vector<int> hyps;
    for (int h = 0; h < static_cast<int>(family_.size()); ++h)
      if (V >> h & 1) hyps.push_back(h);
    return hyps;
  }

  std::vector<int> learner_answer(Bits V, const Query& q) {
    auto hyps = to_vector(V);
    std::mt19937_64 rng(0);
    GameView view{protocol_, family_, hyps, 1, &rng};
    if (protocol_.model == Model::delayed_relpos) {
      int token = learner_->subround_token(view, q, {});
      return {token == 1 ? 2 : 1};
    }
    Guess g = learner_->guess(view, q);
    validate_guess(protocol_, family_, q, g);
    return canonical_guess(protocol_, g);
  }

  long long wc_one_shot(Bits V) {
    if (count(V) <= 1) return 0;
    auto it = wc_memo_.find(V);
    if (it != wc_memo_.end()) return it->second;
    long long best = 0;
    for (const Query& q : queries_) {
      auto parts = partition(V, q);
      auto g = learner_answer(V, q);
      if (protocol_.reveal) {
        if (parts.size() < 2) {
          if (g != parts.begin()->first)
            throw precondition_error(
                "learner guessed an answer no survivor holds");
          continue;
        }
        for (const auto& [a, Va] : parts)
          best = std::max(best, (a != g ? 1 : 0) + wc_one_shot(Va));
      } else {
        auto part = parts.find(g);
        Bits Vg = part == parts.end() ? 0 : part->second;
        if (Vg == V) continue;
        if (Vg == 0)
          throw precondition_error(
              "learner guessed an answer no survivor holds");
        best = std::max(best, wc_one_shot(Vg));
        best = std::max(best, 1 + wc_one_shot(V & ~Vg));
      }
    }
    wc_memo_.emplace(V, best);
    return best;
  }

  long long wc_amb(Bits V) {
    if (count(V) <= 1) return 0;
    auto it = wc_memo_.find(V);
    if (it != wc_memo_.end()) return it->second;
    long long best = 0;
    Query partial;
    std::vector<int> labels;
    wc_amb_rec(V, V, partial, labels, best);
    wc_memo_.emplace(V, best);
    return best;
  }

  void wc_amb_rec(Bits V, Bits prefix, Query& partial,
                  std::vector<int>& labels, long long& best) {
    if (static_cast<int>(labels.size()) == protocol_.r) {
      if (prefix == V) return;  // no-op line, the adversary moves on
      if (prefix == 0)
        throw precondition_error("learner tuple matches no survivor");
      best = std::max(best, wc_amb(prefix));
      best = std::max(best, 1 + wc_amb(V & ~prefix));
      return;
    }
    for (int x = 1; x <= family_.domain_size(); ++x) {
      partial.inputs.push_back(x);
      auto hyps = to_vector(V);
      std::mt19937_64 rng(0);
      GameView view{protocol_, family_, hyps, 1, &rng};
      int label = learner_->subround_label(view, partial, labels);
      if (label < 0 || label >= family_.label_count())
        throw precondition_error("learner label out of range");
      labels.push_back(label);
      Bits next = 0;
      for (int h = 0; h < static_cast<int>(family_.size()); ++h)
        if ((prefix >> h & 1) && family_.eval(h, x) == label)
          next |= Bits{1} << h;
      wc_amb_rec(V, next, partial, labels, best);
      labels.pop_back();
      partial.inputs.pop_back();
    }
  }

  static std::string query_text(const Query& q) {
    std::ostringstream os;
    if (!q.pairs.empty()) {
      for (const auto& [a, b] : q.pairs) os << '(' << a << ',' << b << ')';
    } else {
      os << '(';
      for (std::size_t i = 0; i < q.inputs.size(); ++i)
        os << (i ? "," : "") << q.inputs[i];
      os << ')';
    }
    return os.str();
  }

  static std::string answer_text(const std::vector<int>& a) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < a.size(); ++i) os << (i ? " " : "") << a[i];
    os << ']';
    return os.str();
  }

  void render(Bits V, int depth, std::ostringstream& os) {
    std::string pad(2 * depth, ' ');
    long long v = value(V);
    os << pad << count(V) << " hypotheses, value " << v << '\n';
    if (v == 0) return;
    // First query achieving the value, then the learner's best response.
    for (const Query& q : queries_) {
      auto parts = partition(V, q);
      if (parts.size() < 2) continue;
      long long best_l = LLONG_MAX;
      for (const auto& [g, Vg] : parts) {
        long long cost;
        if (protocol_.reveal) {
          cost = 0;
          for (const auto& [a, Va] : parts)
            cost = std::max(cost, (a != g ? 1 : 0) + value(Va));
        } else {
          cost = std::max(value(Vg), 1 + value(V & ~Vg));
        }
        best_l = std::min(best_l, cost);
      }
      if (best_l != v) continue;
      auto g = best_response(V, q);
      os << pad << "ask " << query_text(q) << ", best guess "
         << answer_text(g) << '\n';
      if (protocol_.reveal) {
        for (const auto& [a, Va] : parts) {
          os << pad << (a == g ? "reveal " : "reveal (mistake) ")
             << answer_text(a) << ":\n";
          render(Va, depth + 1, os);
        }
      } else {
        Bits Vg = parts.at(g);
        os << pad << "yes:\n";
        render(Vg, depth + 1, os);
        os << pad << "no (mistake):\n";
        render(V & ~Vg, depth + 1, os);
      }
      return;
    }
  }

  struct TupleHash {
    std::size_t operator()(const std::tuple<Bits, Bits, int>& t) const {
      auto [a, b, c] = t;
      std::size_t h = std::hash<Bits>{}(a);
      h ^= std::hash<Bits>{}(b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h ^= std::hash<int>{}(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      return h;
    }
  };

  Protocol protocol_;
  const FunctionFamily& family_;
  SolveCaps caps_;
  std::vector<Query> queries_;
  std::unordered_map<Bits, long long> memo_;
  std::unordered_map<Bits, long long> wc_memo_;
  std::unordered_map<std::tuple<Bits, Bits, int>, std::optional<long long>,
                     TupleHash>
      amb_memo_;
  Learner* learner_ = nullptr;
};

}  // namespace

long long exact_opt(const Protocol& protocol, const FunctionFamily& family,
                    const SolveCaps& caps) {
  Solver solver(protocol, family, caps);
  return solver.value(solver.full());
}

bool exact_opt_invariance_check(const FunctionFamily& family, int r,
                                const SolveCaps& caps) {
  Protocol standard{Model::cart, 1, true};
  long long single = exact_opt(standard, family, caps);
  auto product = cart_materialize(family, r);
  long long bundled = exact_opt(standard, product, caps);
  return single == bundled;
}

long long worst_case_vs_learner(const Protocol& protocol,
                                const FunctionFamily& family, Learner& learner,
                                const SolveCaps& caps) {
  Solver solver(protocol, family, caps);
  return solver.worst_case(learner);
}

std::string solve_tree(const Protocol& protocol, const FunctionFamily& family,
                       const SolveCaps& caps) {
  Solver solver(protocol, family, caps);
  return solver.tree();
}

struct OptimalLearner::Impl {
  Impl(const Protocol& protocol, const FunctionFamily& family,
       const SolveCaps& caps)
      : solver(protocol, family, caps) {}
  Solver solver;
};

OptimalLearner::OptimalLearner(const Protocol& protocol,
                               const FunctionFamily& family, SolveCaps caps)
    : impl_(std::make_unique<Impl>(protocol, family, caps)) {}

OptimalLearner::~OptimalLearner() = default;

Guess OptimalLearner::guess(const GameView& view, const Query& query) {
  Bits V = impl_->solver.bits_of(view.version_space);
  Guess g;
  g.values = impl_->solver.best_response(V, query);
  return g;
}

int OptimalLearner::subround_label(const GameView& view, const Query& partial,
                                   const std::vector<int>& labels_so_far) {
  Bits V = impl_->solver.bits_of(view.version_space);
  Bits prefix = impl_->solver.amb_prefix(V, partial, labels_so_far);
  if (prefix == 0)
    throw precondition_error("no survivor matches the labels given so far");
  return impl_->solver.best_label(V, prefix, partial.inputs.back(),
                                  static_cast<int>(labels_so_far.size()));
}

int OptimalLearner::subround_token(const GameView& view, const Query& partial,
                                   const std::vector<int>&) {
  Bits V = impl_->solver.bits_of(view.version_space);
  auto rank = impl_->solver.best_response(V, partial);
  return rank.at(0) == 2 ? 1 : 0;
}

}  // namespace mbl
