#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mbl/errors.hpp"

namespace mbl {

// Extensional hypothesis class: |F| rows over the domain {1..|X|} with labels
// in {0..|Y|-1}. Rows are pairwise distinct. Inputs are 1-based everywhere;
// labels are 0-based.
class FunctionFamily {
 public:
  FunctionFamily(int domain_size, int label_count,
                 std::vector<std::vector<int>> rows,
                 std::vector<std::string> names = {});

  int domain_size() const { return domain_size_; }
  int label_count() const { return label_count_; }
  int size() const { return static_cast<int>(names_.size()); }

  // h in [0, size), input in [1, domain_size].
  int eval(int h, int input) const;
  const std::string& name(int h) const { return names_.at(h); }
  std::vector<int> row(int h) const;

  // True when every row is a bijection onto {0..domain_size-1} (so the family
  // can host the permutation-pattern protocols).
  bool rows_are_permutations() const;

 private:
  int domain_size_;
  int label_count_;
  std::vector<int> table_;  // row-major, size * domain_size
  std::vector<std::string> names_;
};

// Non-decreasing 0/1 family: hypothesis i fires iff input >= thresholds[i].
// Thresholds are strictly increasing values in [1, domain_size + 1]; the value
// domain_size + 1 encodes the identically-zero hypothesis.
struct ThresholdFamily {
  int domain_size = 0;
  std::vector<int> thresholds;

  FunctionFamily materialize() const;
};

ThresholdFamily build_threshold_family(int domain_size,
                                       std::vector<int> thresholds);

// Convenience grid used by sweeps and the acceptance matrix: m hypotheses with
// thresholds 1,3,5,...,2m-1 over domain {1..2m}.
ThresholdFamily spread_threshold_family(int m);

// F = {x -> a.x mod p : a in A} over domain {0..p-1}^n (indexed 1..p^n).
// restricted limits the coefficient vectors to {1..p-1}^n.
struct LinearFamily {
  int modulus = 0;  // prime
  int dimension = 0;
  bool restricted = false;

  long long size() const;
  long long domain_points() const;  // always modulus^dimension
  std::vector<int> coefficient(long long index) const;
  std::vector<int> domain_point(long long index) const;  // index in [1, p^n]
  int eval_vector(const std::vector<int>& coeff,
                  const std::vector<int>& point) const;

  FunctionFamily materialize(long long max_rows = 4096) const;
};

LinearFamily build_linear_family(int modulus, int dimension, bool restricted);

// Explicit permutation family over [n]; perms are 1-based vectors.
struct PermutationFamily {
  int n = 0;
  std::vector<std::vector<int>> perms;
  std::optional<std::vector<int>> avoided;  // set when built as an avoiding family

  // Labels are f(x)-1 so the FunctionFamily rows live in {0..n-1}.
  FunctionFamily materialize() const;
};

PermutationFamily build_permutation_family(int n, int max_n = 10);
PermutationFamily build_avoiding_family(int n, std::vector<int> pattern,
                                        int max_n = 10);

// Rank vector of a sequence of distinct values: pattern_of({5,2,9}) = {2,1,3}.
std::vector<int> pattern_of(const std::vector<int>& values);

// Classical containment: some subsequence of perm is order-isomorphic to
// pattern. Brute force over subsequences; perm capped at 12 elements.
bool contains_pattern(const std::vector<int>& perm,
                      const std::vector<int>& pattern);

// CART_r(F) as a plain family: domain indexes (x_1..x_r) in base-|X|, labels
// encode the answer tuple in base-|Y|. Used by the oracle's invariance check.
FunctionFamily cart_materialize(const FunctionFamily& family, int r,
                                long long max_rows = 4096,
                                long long max_domain = 4096);

// Answer tuple of hypothesis h on r inputs, without materializing CART_r.
std::vector<int> cart_product_eval(const FunctionFamily& family, int h,
                                   const std::vector<int>& inputs);

// Text serialization.
//   family <kind> <|X|> <|Y|> <|F|>
//   [one compact parameter line for threshold/linear/permutation kinds]
//   <|F| rows of space-separated labels>
void write_family(std::ostream& os, const FunctionFamily& family,
                  const std::string& kind = "generic",
                  const std::string& params = "");
void write_family(std::ostream& os, const ThresholdFamily& family);
void write_family(std::ostream& os, const LinearFamily& family);
void write_family(std::ostream& os, const PermutationFamily& family);
FunctionFamily read_family(std::istream& is);

}  // namespace mbl
