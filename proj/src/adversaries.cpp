#include "mbl/adversaries.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace mbl {

namespace {

// Threshold of a non-decreasing 0/1 row: smallest input labeled 1, or
// |X| + 1 for the all-zero row. Throws when the row is not a step.
int row_threshold(const FunctionFamily& family, int h) {
  if (family.label_count() != 2)
    throw config_error("threshold attacks need 0/1 labels");
  const int X = family.domain_size();
  int threshold = X + 1;
  for (int x = 1; x <= X; ++x) {
    int v = family.eval(h, x);
    if (v == 1 && threshold == X + 1) threshold = x;
    if (v == 0 && threshold != X + 1)
      throw config_error("threshold attacks need non-decreasing rows");
  }
  return threshold;
}

void require_threshold_rows(const FunctionFamily& family) {
  for (int h = 0; h < family.size(); ++h) row_threshold(family, h);
}

std::vector<int> sorted_thresholds(const FunctionFamily& family,
                                   const std::vector<int>& hyps) {
  std::vector<int> b;
  b.reserve(hyps.size());
  for (int h : hyps) b.push_back(row_threshold(family, h));
  std::sort(b.begin(), b.end());
  return b;
}

Feedback no_or_forced_yes(const GameView& view, const Query& query,
                          const Guess& guess) {
  auto answer = canonical_guess(view.protocol, guess);
  for (int h : view.version_space)
    if (answer_of(view.protocol, view.family, h, query) != answer)
      return Feedback{FeedbackKind::no, {}};
  // Every survivor agrees, so only "yes" is truthful.
  return Feedback{FeedbackKind::yes, {}};
}

long long realized_answer_count(const GameView& view, const Query& query) {
  std::set<std::vector<int>> seen;
  for (int h : view.version_space)
    seen.insert(answer_of(view.protocol, view.family, h, query));
  return static_cast<long long>(seen.size());
}

int ceil_div(long long a, long long b) { return static_cast<int>((a + b - 1) / b); }

}  // namespace

void ThresholdMaximinAdversary::begin(const GameView& view) {
  if (view.protocol.model != Model::cart || view.protocol.reveal)
    throw config_error("threshold-maximin plays yes/no label-tuple rounds");
  require_threshold_rows(view.family);
}

bool ThresholdMaximinAdversary::round_available(const GameView& view) {
  return view.version_space.size() >= 2;
}

Query ThresholdMaximinAdversary::next_query(const GameView& view) {
  auto b = sorted_thresholds(view.family, view.version_space);
  const int N = static_cast<int>(b.size());
  const int r = view.protocol.r;
  const int c = ceil_div(N, r + 1);
  Query query;
  for (int i = 1; i <= r; ++i) {
    int idx = std::min(i * c + 1, N);
    query.inputs.push_back(b[idx - 1] - 1);
  }
  return query;
}

Feedback ThresholdMaximinAdversary::feedback(const GameView& view,
                                             const Query& query,
                                             const Guess& guess) {
  return no_or_forced_yes(view, query, guess);
}

void AmbMedianAdversary::begin(const GameView& view) {
  if (view.protocol.model != Model::amb)
    throw config_error("amb-median plays subround label rounds");
  require_threshold_rows(view.family);
}

bool AmbMedianAdversary::round_available(const GameView& view) {
  return view.version_space.size() >= 2;
}

int AmbMedianAdversary::next_amb_input(const GameView& view,
                                       const Query& partial,
                                       const std::vector<int>& labels_so_far) {
  std::vector<int> consistent;
  for (int h : view.version_space) {
    bool ok = true;
    for (std::size_t i = 0; i < labels_so_far.size(); ++i)
      if (view.family.eval(h, partial.inputs[i]) != labels_so_far[i]) {
        ok = false;
        break;
      }
    if (ok) consistent.push_back(h);
  }
  // A learner that answered inconsistently emptied the set; any input is
  // then as good as any other, so fall back to all survivors.
  if (consistent.empty()) consistent = view.version_space;
  auto b = sorted_thresholds(view.family, consistent);
  int x = b[(b.size() + 1) / 2 - 1];
  return std::min(x, view.family.domain_size());
}

Feedback AmbMedianAdversary::feedback(const GameView& view, const Query& query,
                                      const Guess& guess) {
  return no_or_forced_yes(view, query, guess);
}

void OrderInsertionAdversary::begin(const GameView& view) {
  if (view.protocol.model != Model::order || view.protocol.r != 2)
    throw config_error("insertion plays pair order queries");
  const int n = view.family.domain_size();
  long long fact = 1;
  for (int i = 2; i <= n; ++i) fact *= i;
  if (static_cast<long long>(view.family.size()) != fact)
    throw config_error("insertion needs the full permutation family");
  placed_ = {1};
  pending_ = n >= 2 ? 2 : 0;
  lo_ = 1;
  hi_ = 2;
}

void OrderInsertionAdversary::advance(const GameView& view) {
  while (pending_ != 0 && lo_ == hi_) {
    placed_.insert(placed_.begin() + (lo_ - 1), pending_);
    if (pending_ == view.family.domain_size()) {
      pending_ = 0;
    } else {
      ++pending_;
      lo_ = 1;
      hi_ = static_cast<int>(placed_.size()) + 1;
    }
  }
}

bool OrderInsertionAdversary::round_available(const GameView& view) {
  advance(view);
  return pending_ != 0;
}

Query OrderInsertionAdversary::next_query(const GameView&) {
  int mid = (lo_ + hi_) / 2;  // slot midpoint, half up, in [lo_, hi_-1]
  Query query;
  query.inputs = {placed_[mid - 1], pending_};  // placed values < pending
  return query;
}

Feedback OrderInsertionAdversary::feedback(const GameView&, const Query&,
                                           const Guess& guess) {
  int mid = (lo_ + hi_) / 2;
  // Pattern (1,2) claims f(placed) < f(pending): slot above mid. The "no"
  // erases the claimed half of the window.
  if (guess.values == std::vector<int>{1, 2})
    hi_ = mid;
  else
    lo_ = mid + 1;
  return Feedback{FeedbackKind::no, {}};
}

void OrderMergeAdversary::begin(const GameView& view) {
  if (view.protocol.model != Model::order || view.protocol.r < 2)
    throw config_error("merge plays order queries with r >= 2");
  worklist_.clear();
  blocks_.clear();
  active_.clear();
  next_block_ = 0;
  std::vector<int> all(view.family.domain_size());
  std::iota(all.begin(), all.end(), 1);
  worklist_.push_back(std::move(all));
}

void OrderMergeAdversary::advance(const GameView& view) {
  const int r = view.protocol.r;
  for (;;) {
    if (!active_.empty()) {
      Query query;
      query.inputs = active_;
      if (realized_answer_count(view, query) >= 2) return;
      active_.clear();
      continue;
    }
    if (next_block_ < blocks_.size()) {
      active_ = blocks_[next_block_++];
      continue;
    }
    if (!blocks_.empty()) {
      // All blocks pinned: split into classes by within-block rank.
      std::vector<std::vector<int>> classes(r);
      int witness = view.version_space.front();
      for (const auto& block : blocks_) {
        Query query;
        query.inputs = block;
        auto pattern = answer_of(view.protocol, view.family, witness, query);
        for (std::size_t i = 0; i < block.size(); ++i)
          classes[pattern[i] - 1].push_back(block[i]);
      }
      blocks_.clear();
      next_block_ = 0;
      for (auto& cls : classes)
        if (static_cast<int>(cls.size()) >= r) worklist_.push_back(std::move(cls));
      continue;
    }
    if (!worklist_.empty()) {
      std::vector<int> elements = std::move(worklist_.front());
      worklist_.erase(worklist_.begin());
      const int full = static_cast<int>(elements.size()) / r;
      for (int j = 0; j < full; ++j)
        blocks_.emplace_back(elements.begin() + j * r,
                             elements.begin() + (j + 1) * r);
      next_block_ = 0;
      continue;
    }
    return;  // done
  }
}

bool OrderMergeAdversary::round_available(const GameView& view) {
  advance(view);
  return !active_.empty();
}

Query OrderMergeAdversary::next_query(const GameView&) {
  Query query;
  query.inputs = active_;
  return query;
}

Feedback OrderMergeAdversary::feedback(const GameView& view, const Query& query,
                                       const Guess& guess) {
  return no_or_forced_yes(view, query, guess);
}

void ComparisonQuicksortAdversary::begin(const GameView& view) {
  if (view.protocol.model != Model::comparison)
    throw config_error("quicksort plays comparison queries");
  worklist_.clear();
  blocks_.clear();
  active_.clear();
  below_.clear();
  above_.clear();
  block_counts_.clear();
  pivot_ = 0;
  next_block_ = 0;
  active_nos_ = 0;
  std::vector<int> all(view.family.domain_size());
  std::iota(all.begin(), all.end(), 1);
  if (all.size() >= 2) worklist_.push_back(std::move(all));
}

void ComparisonQuicksortAdversary::advance(const GameView& view) {
  const int r = view.protocol.r;
  for (;;) {
    if (!active_.empty()) {
      Query query;
      for (int s : active_) query.pairs.emplace_back(s, pivot_);
      if (realized_answer_count(view, query) >= 2) return;
      // Block pinned: read the side of each element off a witness.
      int witness = view.version_space.front();
      auto bits = answer_of(view.protocol, view.family, witness, query);
      for (std::size_t i = 0; i < active_.size(); ++i)
        (bits[i] == 1 ? below_ : above_).push_back(active_[i]);
      block_counts_.push_back(active_nos_);
      active_.clear();
      active_nos_ = 0;
      continue;
    }
    if (next_block_ < blocks_.size()) {
      active_ = blocks_[next_block_++];
      active_nos_ = 0;
      continue;
    }
    if (pivot_ != 0) {
      if (below_.size() >= 2) worklist_.push_back(below_);
      if (above_.size() >= 2) worklist_.push_back(above_);
      below_.clear();
      above_.clear();
      pivot_ = 0;
      continue;
    }
    if (!worklist_.empty()) {
      std::vector<int> elements = std::move(worklist_.front());
      worklist_.erase(worklist_.begin());
      pivot_ = elements.back();  // largest input value plays the pivot
      elements.pop_back();
      const int full = static_cast<int>(elements.size()) / r;
      blocks_.clear();
      for (int j = 0; j < full; ++j)
        blocks_.emplace_back(elements.begin() + j * r,
                             elements.begin() + (j + 1) * r);
      next_block_ = 0;
      continue;
    }
    return;  // done
  }
}

bool ComparisonQuicksortAdversary::round_available(const GameView& view) {
  advance(view);
  return !active_.empty();
}

Query ComparisonQuicksortAdversary::next_query(const GameView&) {
  Query query;
  for (int s : active_) query.pairs.emplace_back(s, pivot_);
  return query;
}

Feedback ComparisonQuicksortAdversary::feedback(const GameView& view,
                                                const Query& query,
                                                const Guess& guess) {
  Feedback fb = no_or_forced_yes(view, query, guess);
  if (fb.kind == FeedbackKind::no) ++active_nos_;
  return fb;
}

void SelectionMergeAdversary::begin(const GameView& view) {
  if (view.protocol.model != Model::selection || view.protocol.r < 2)
    throw config_error("selection-merge plays max queries with r >= 2");
  frames_.clear();
  first_merge_nos_ = 0;
  std::vector<int> all(view.family.domain_size());
  std::iota(all.begin(), all.end(), 1);

  Frame root;
  root.root = true;
  const int r = view.protocol.r;
  const int n = static_cast<int>(all.size());
  if (n <= r) {
    for (int x : all) root.pending.push_back({x});
  } else {
    // r nearly equal consecutive chunks; the remainder pads the early ones.
    int base = n / r, rem = n % r, at = 0;
    for (int i = 0; i < r; ++i) {
      int len = base + (i < rem ? 1 : 0);
      root.pending.emplace_back(all.begin() + at, all.begin() + at + len);
      at += len;
    }
  }
  frames_.push_back(std::move(root));
}

std::vector<int> SelectionMergeAdversary::leaders() const {
  std::vector<int> tops;
  for (const auto& stack : frames_.back().stacks)
    if (!stack.empty()) tops.push_back(stack.back());
  return tops;
}

void SelectionMergeAdversary::advance(const GameView& view) {
  const int r = view.protocol.r;
  while (!frames_.empty()) {
    Frame& frame = frames_.back();
    if (!frame.pending.empty()) {
      std::vector<int> block = std::move(frame.pending.front());
      frame.pending.erase(frame.pending.begin());
      if (block.size() == 1) {
        frame.stacks.push_back(std::move(block));
        continue;
      }
      Frame sub;
      const int m = static_cast<int>(block.size());
      if (m <= r) {
        for (int x : block) sub.pending.push_back({x});
      } else {
        int base = m / r, rem = m % r, at = 0;
        for (int i = 0; i < r; ++i) {
          int len = base + (i < rem ? 1 : 0);
          sub.pending.emplace_back(block.begin() + at, block.begin() + at + len);
          at += len;
        }
      }
      frames_.push_back(std::move(sub));
      continue;
    }
    // Merge phase.
    auto tops = leaders();
    if (tops.size() >= 2) {
      Query query;
      query.inputs = tops;
      while (static_cast<int>(query.inputs.size()) < r)
        query.inputs.push_back(tops.front());
      if (realized_answer_count(view, query) >= 2) return;
      // Maximum pinned without further forcing: delete it and iterate.
      int witness = view.version_space.front();
      int top = answer_of(view.protocol, view.family, witness, query)[0];
      for (auto& stack : frame.stacks)
        if (!stack.empty() && stack.back() == top) {
          stack.pop_back();
          break;
        }
      frame.merged.push_back(top);
      frame.first_iteration = false;
      continue;
    }
    for (auto& stack : frame.stacks)
      while (!stack.empty()) {
        frame.merged.push_back(stack.back());
        stack.pop_back();
      }
    std::vector<int> result = std::move(frame.merged);
    bool was_root = frame.root;
    frames_.pop_back();
    if (!was_root) {
      std::reverse(result.begin(), result.end());  // stack wants max on top
      frames_.back().stacks.push_back(std::move(result));
    }
  }
}

bool SelectionMergeAdversary::round_available(const GameView& view) {
  advance(view);
  return !frames_.empty();
}

Query SelectionMergeAdversary::next_query(const GameView& view) {
  auto tops = leaders();
  Query query;
  query.inputs = tops;
  while (static_cast<int>(query.inputs.size()) < view.protocol.r)
    query.inputs.push_back(tops.front());
  return query;
}

Feedback SelectionMergeAdversary::feedback(const GameView& view,
                                           const Query& query,
                                           const Guess& guess) {
  Feedback fb = no_or_forced_yes(view, query, guess);
  if (fb.kind == FeedbackKind::no && frames_.size() == 1 &&
      frames_.back().root && frames_.back().first_iteration)
    ++first_merge_nos_;
  return fb;
}

namespace {

// Survivors that order `placed` exactly as listed (ascending f-values).
std::vector<int> order_witnesses(const GameView& view,
                                 const std::vector<int>& placed) {
  std::vector<int> keep;
  for (int h : view.version_space) {
    bool ok = true;
    for (std::size_t i = 1; i < placed.size(); ++i)
      if (view.family.eval(h, placed[i - 1]) >= view.family.eval(h, placed[i])) {
        ok = false;
        break;
      }
    if (ok) keep.push_back(h);
  }
  return keep;
}

// Slots (1 = below everything placed) some witness can put `pending` into.
std::vector<int> feasible_slots_of(const GameView& view,
                                   const std::vector<int>& placed, int pending) {
  std::set<int> slots;
  for (int h : order_witnesses(view, placed)) {
    int below = 0;
    int fx = view.family.eval(h, pending);
    for (int p : placed)
      if (view.family.eval(h, p) < fx) ++below;
    slots.insert(1 + below);
  }
  return std::vector<int>(slots.begin(), slots.end());
}

// First r elements in the arrangement of the first hypothesis; later
// elements are attacked one at a time.
std::vector<int> committed_prefix(const GameView& view, int r) {
  std::vector<int> prefix(r);
  std::iota(prefix.begin(), prefix.end(), 1);
  int h0 = view.version_space.front();
  std::sort(prefix.begin(), prefix.end(), [&](int a, int b) {
    return view.family.eval(h0, a) < view.family.eval(h0, b);
  });
  return prefix;
}

// Separator elements for the quantile slots, padded to r distinct entries.
std::vector<int> separator_elements(const std::vector<int>& placed,
                                    const std::vector<int>& feasible, int r) {
  const int N = static_cast<int>(feasible.size());
  const int c = ceil_div(N, r + 1);
  std::vector<int> chosen;
  for (int i = 1; i <= r; ++i) {
    int idx = std::min(i * c + 1, N);
    int separator = feasible[idx - 1] - 1;  // in [1, |placed|]
    int element = placed[separator - 1];
    if (std::find(chosen.begin(), chosen.end(), element) == chosen.end())
      chosen.push_back(element);
  }
  for (int p : placed) {
    if (static_cast<int>(chosen.size()) == r) break;
    if (std::find(chosen.begin(), chosen.end(), p) == chosen.end())
      chosen.push_back(p);
  }
  return chosen;
}

}  // namespace

void RelposThresholdAdversary::begin(const GameView& view) {
  if (view.protocol.model != Model::relpos)
    throw config_error("relpos-threshold plays rank queries");
  placed_ = committed_prefix(view, view.protocol.r);
  pending_ = view.protocol.r + 1;
  feasible_.clear();
}

void RelposThresholdAdversary::refresh_feasible(const GameView& view) {
  feasible_ = feasible_slots_of(view, placed_, pending_);
  if (feasible_.empty())
    throw precondition_error("rank attack lost every witness");
  if (measured_ != pending_) {
    // Window width at introduction, before this element's own rounds.
    min_feasible_ = std::min(min_feasible_, static_cast<int>(feasible_.size()));
    measured_ = pending_;
  }
}

void RelposThresholdAdversary::advance(const GameView& view) {
  while (pending_ != 0) {
    refresh_feasible(view);
    if (feasible_.size() >= 2) return;
    placed_.insert(placed_.begin() + (feasible_[0] - 1), pending_);
    pending_ = pending_ < view.family.domain_size() ? pending_ + 1 : 0;
  }
}

bool RelposThresholdAdversary::round_available(const GameView& view) {
  advance(view);
  return pending_ != 0;
}

Query RelposThresholdAdversary::next_query(const GameView& view) {
  Query query;
  query.inputs.push_back(pending_);
  for (int s : separator_elements(placed_, feasible_, view.protocol.r))
    query.inputs.push_back(s);
  return query;
}

Feedback RelposThresholdAdversary::feedback(const GameView& view,
                                            const Query& query,
                                            const Guess& guess) {
  return no_or_forced_yes(view, query, guess);
}

void DelayedRelposAdversary::begin(const GameView& view) {
  if (view.protocol.model != Model::delayed_relpos)
    throw config_error("delayed-relpos plays delayed rank rounds");
  placed_ = committed_prefix(view, view.protocol.r);
  pending_ = view.protocol.r + 1;
  feasible_.clear();
}

void DelayedRelposAdversary::refresh_feasible(const GameView& view) {
  feasible_ = feasible_slots_of(view, placed_, pending_);
  if (feasible_.empty())
    throw precondition_error("rank attack lost every witness");
}

void DelayedRelposAdversary::advance(const GameView& view) {
  while (pending_ != 0) {
    refresh_feasible(view);
    if (feasible_.size() >= 2) return;
    placed_.insert(placed_.begin() + (feasible_[0] - 1), pending_);
    pending_ = pending_ < view.family.domain_size() ? pending_ + 1 : 0;
  }
}

bool DelayedRelposAdversary::round_available(const GameView& view) {
  advance(view);
  return pending_ != 0;
}

int DelayedRelposAdversary::delayed_x(const GameView&) { return pending_; }

int DelayedRelposAdversary::next_delayed_element(
    const GameView&, const Query& partial, const std::vector<int>& tokens_so_far) {
  // Slots still consistent with the learner's calls so far this round: a
  // call of 1 on element y at slot j claims the new element sits above j.
  std::vector<int> live = feasible_;
  for (std::size_t j = 0; j < tokens_so_far.size(); ++j) {
    int revealed = partial.inputs[j + 1];
    auto at = std::find(placed_.begin(), placed_.end(), revealed);
    int slot = static_cast<int>(at - placed_.begin()) + 1;
    std::vector<int> keep;
    for (int g : live)
      if (tokens_so_far[j] == 1 ? g > slot : g <= slot) keep.push_back(g);
    live = std::move(keep);
  }
  if (live.empty()) live = feasible_;

  int m = static_cast<int>((live.size() + 1) / 2);
  int separator = std::min(live[m - 1], static_cast<int>(placed_.size()));
  int element = placed_[separator - 1];
  if (std::find(partial.inputs.begin(), partial.inputs.end(), element) ==
      partial.inputs.end())
    return element;
  // Median already revealed this round: pad with any fresh placed element.
  for (int p : placed_)
    if (std::find(partial.inputs.begin(), partial.inputs.end(), p) ==
        partial.inputs.end())
      return p;
  throw precondition_error("no fresh comparison element available");
}

Feedback DelayedRelposAdversary::feedback(const GameView& view,
                                          const Query& query,
                                          const Guess& guess) {
  return no_or_forced_yes(view, query, guess);
}

void LinearBucketAdversary::begin(const GameView& view) {
  if (view.protocol.model != Model::cart || view.protocol.reveal)
    throw config_error("linear-bucket plays yes/no label-tuple rounds");
  modulus_ = view.family.label_count();
  long long dom = 1;
  dimension_ = 0;
  while (dom < view.family.domain_size()) {
    dom *= modulus_;
    ++dimension_;
  }
  if (dom != view.family.domain_size() || dimension_ == 0)
    throw config_error("linear-bucket needs a p^n point domain");
  warnings_ = 0;
  scores_.clear();
  // The rows must be nonzero-coefficient mod-p maps; spot-check each row
  // against the coefficients read off the unit vectors.
  LinearFamily shape{modulus_, dimension_, true};
  for (int h = 0; h < view.family.size(); ++h) {
    auto coeff = coefficient_of(view, h);
    for (int c : coeff)
      if (c < 1 || c >= modulus_)
        throw config_error("linear-bucket needs nonzero coefficients");
    long long stride = std::max(dom / 64, 1LL);
    for (long long x = 1; x <= dom; x += stride)
      if (view.family.eval(h, static_cast<int>(x)) !=
          shape.eval_vector(coeff, shape.domain_point(x)))
        throw config_error("linear-bucket needs mod-p linear rows");
  }
}

std::vector<int> LinearBucketAdversary::coefficient_of(const GameView& view,
                                                       int h) const {
  // f(e_i) = a_i, and unit vector e_i lives at domain index 1 + p^i.
  std::vector<int> coeff(dimension_);
  long long pw = 1;
  for (int i = 0; i < dimension_; ++i) {
    coeff[i] = view.family.eval(h, static_cast<int>(1 + pw));
    pw *= modulus_;
  }
  return coeff;
}

bool LinearBucketAdversary::round_available(const GameView& view) {
  double threshold =
      std::pow(modulus_, 2 * view.protocol.r) * std::log(modulus_);
  return static_cast<double>(view.version_space.size()) >= threshold;
}

Query LinearBucketAdversary::next_query(const GameView& view) {
  std::vector<std::vector<int>> survivors;
  survivors.reserve(view.version_space.size());
  for (int h : view.version_space) survivors.push_back(coefficient_of(view, h));

  BucketTable table;
  try {
    table = find_good_u(modulus_, dimension_, view.protocol.r, survivors,
                        *view.rng, attempt_budget_);
  } catch (const search_failure& e) {
    table = e.best;
    ++warnings_;
  }
  scores_.push_back(table.max_count);

  Query query;
  for (const auto& u : table.u) {
    long long index = 1, pw = 1;
    for (int i = 0; i < dimension_; ++i) {
      index += static_cast<long long>(u[i]) * pw;
      pw *= modulus_;
    }
    query.inputs.push_back(static_cast<int>(index));
  }
  return query;
}

Feedback LinearBucketAdversary::feedback(const GameView& view,
                                         const Query& query,
                                         const Guess& guess) {
  return no_or_forced_yes(view, query, guess);
}

void RandomTruthfulAdversary::begin(const GameView& view) {
  std::uniform_int_distribution<std::size_t> pick(
      0, view.version_space.size() - 1);
  target_ = view.version_space[pick(*view.rng)];
  rounds_done_ = 0;
}

bool RandomTruthfulAdversary::round_available(const GameView&) {
  return rounds_done_ < budget_;
}

Query RandomTruthfulAdversary::next_query(const GameView& view) {
  const int X = view.family.domain_size();
  const int r = view.protocol.r;
  std::uniform_int_distribution<int> any(1, X);
  Query query;
  switch (view.protocol.model) {
    case Model::cart:
    case Model::selection:
      for (int i = 0; i < r; ++i) query.inputs.push_back(any(*view.rng));
      break;
    case Model::order: {
      std::vector<int> all(X);
      std::iota(all.begin(), all.end(), 1);
      std::shuffle(all.begin(), all.end(), *view.rng);
      query.inputs.assign(all.begin(), all.begin() + r);
      std::sort(query.inputs.begin(), query.inputs.end());
      break;
    }
    case Model::comparison:
      for (int i = 0; i < r; ++i) {
        int a = any(*view.rng);
        int b = a;
        while (b == a) b = any(*view.rng);
        query.pairs.emplace_back(a, b);
      }
      break;
    case Model::relpos: {
      std::vector<int> all(X);
      std::iota(all.begin(), all.end(), 1);
      std::shuffle(all.begin(), all.end(), *view.rng);
      query.inputs.assign(all.begin(), all.begin() + r + 1);
      break;
    }
    default:
      throw config_error("random adversary one-shot query on a subround model");
  }
  return query;
}

int RandomTruthfulAdversary::next_amb_input(const GameView& view, const Query&,
                                            const std::vector<int>&) {
  std::uniform_int_distribution<int> any(1, view.family.domain_size());
  return any(*view.rng);
}

int RandomTruthfulAdversary::delayed_x(const GameView& view) {
  std::uniform_int_distribution<int> any(1, view.family.domain_size());
  return any(*view.rng);
}

int RandomTruthfulAdversary::next_delayed_element(
    const GameView& view, const Query& partial, const std::vector<int>&) {
  std::vector<int> fresh;
  for (int x = 1; x <= view.family.domain_size(); ++x)
    if (std::find(partial.inputs.begin(), partial.inputs.end(), x) ==
        partial.inputs.end())
      fresh.push_back(x);
  std::uniform_int_distribution<std::size_t> pick(0, fresh.size() - 1);
  return fresh[pick(*view.rng)];
}

Feedback RandomTruthfulAdversary::feedback(const GameView& view,
                                           const Query& query,
                                           const Guess& guess) {
  ++rounds_done_;
  auto truth = answer_of(view.protocol, view.family, target_, query);
  if (view.protocol.reveal) return Feedback{FeedbackKind::reveal, truth};
  return Feedback{canonical_guess(view.protocol, guess) == truth
                      ? FeedbackKind::yes
                      : FeedbackKind::no,
                  {}};
}

std::unique_ptr<Adversary> make_adversary(
    const std::string& name, const std::map<std::string, std::string>& options) {
  auto opt_ll = [&](const std::string& key, long long fallback) {
    auto it = options.find(key);
    if (it == options.end()) return fallback;
    try {
      return std::stoll(it->second);
    } catch (const std::exception&) {
      throw config_error("option " + key + " wants an integer, got '" +
                         it->second + "'");
    }
  };
  if (name == "threshold-maximin")
    return std::make_unique<ThresholdMaximinAdversary>();
  if (name == "amb-median") return std::make_unique<AmbMedianAdversary>();
  if (name == "insertion") return std::make_unique<OrderInsertionAdversary>();
  if (name == "merge") return std::make_unique<OrderMergeAdversary>();
  if (name == "quicksort")
    return std::make_unique<ComparisonQuicksortAdversary>();
  if (name == "selection-merge")
    return std::make_unique<SelectionMergeAdversary>();
  if (name == "relpos-threshold" || name == "relpos-avoiding")
    return std::make_unique<RelposThresholdAdversary>();
  if (name == "delayed-relpos") return std::make_unique<DelayedRelposAdversary>();
  if (name == "linear-bucket")
    return std::make_unique<LinearBucketAdversary>(
        static_cast<int>(opt_ll("attempts", 32)));
  if (name == "random")
    return std::make_unique<RandomTruthfulAdversary>(opt_ll("budget", 64));
  throw config_error("unknown adversary: " + name);
}

long long insertion_window_mistakes(
    int n, const std::function<bool(int lo, int hi, int mid)>& claim_low) {
  long long total = 0;
  for (int m = 2; m <= n; ++m) {
    int lo = 1, hi = m;
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      ++total;
      if (claim_low(lo, hi, mid))
        lo = mid + 1;
      else
        hi = mid;
    }
  }
  return total;
}

}  // namespace mbl
