#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mbl/errors.hpp"

namespace mbl {

// v(n) = floor(log2 n); p(n) = sum_{m<=n} v(m), the insertion lower bound.
int v_floor_log2(long long n);
long long p_direct(long long n);
long long p_closed(long long n);

// Exact nonnegative rational (num/den in lowest terms, den > 0).
struct Rational {
  long long num = 0;
  long long den = 1;
  bool operator==(const Rational&) const = default;
};
Rational make_rational(long long num, long long den);
std::string to_string(const Rational& r);

// Fraction of input tuples u = (u_1..u_r), u_i in {0..p-1}^n, with
// s.u_i = z_i (mod p) for all i. Exhaustive over all p^{nr} tuples.
// Preconditions: p prime, s has all coordinates in {1..p-1}, z_i in [0,p).
Rational check_uniformity(int p, int n, int r, const std::vector<int>& s,
                          const std::vector<int>& z);

// Conditional fraction of tuples with t.u_i = z_i given s.u_i = z_i for all i.
// Additional precondition: t is not a scalar multiple of s mod p.
Rational check_conditional(int p, int n, int r, const std::vector<int>& s,
                           const std::vector<int>& t, const std::vector<int>& z);

// Bucket sizes |T_z| over a survivor set S of coefficient vectors, where
// T_z = {a in S : a.u_i = z_i (mod p) for all i}.
struct BucketTable {
  std::vector<std::vector<int>> u;  // r vectors of length n
  std::vector<long long> counts;    // indexed by z encoded base p
  long long max_count = 0;
  long long total = 0;
};
BucketTable bucket_counts(int p, int n, int r,
                          const std::vector<std::vector<int>>& u,
                          const std::vector<std::vector<int>>& survivors);

double bucket_bound(long long survivor_count, int p, int r);  // |S|/p^r + 2 sqrt(|S|)

// Sample input tuples until one has max bucket <= bucket_bound. Throws
// search_failure (carrying the best candidate) when the budget runs out.
struct search_failure : mbl_error {
  search_failure(const std::string& what, BucketTable best_table)
      : mbl_error(what), best(std::move(best_table)) {}
  BucketTable best;
};
BucketTable find_good_u(int p, int n, int r,
                        const std::vector<std::vector<int>>& survivors,
                        std::mt19937_64& rng, int budget = 32);

// All of {1..p-1}^n, the survivor set the linear-family game starts from.
std::vector<std::vector<int>> restricted_vectors(int p, int n);

// ceil(ceil(a/b)/n) == ceil(a/(b*n)) over a deterministic grid of ~10^4
// (rational, integer) pairs. Returns the number of violations (0 expected).
int ceil_identity_violations();

// Upper-bound expressions, reported as real values plus the integer mistake
// caps the proofs use. cap < 0 means the expression has no integer-cap form
// (or is undefined at these parameters).
struct BoundEntry {
  std::string name;
  double value = 0.0;
  long long cap = -1;
};

struct BoundParams {
  long long family_size = 0;  // |F|
  int r = 1;
  int label_count = 2;        // k
  long long n = 0;            // permutation ground-set size (p(n) row), 0 = skip
  long long base_mistakes = 0;  // M, base-learner bound for the pool rows; 0 = skip
};

// Largest m >= 0 with (num/den)^m <= value; exact integer arithmetic.
long long int_log_cap(long long num, long long den, long long value);

double expert_pool_alpha(int label_count, int r);  // 1/(k^r ln k)

std::vector<BoundEntry> bound_table(const BoundParams& params);
void write_bound_csv(std::ostream& os, const std::vector<BoundEntry>& entries);

}  // namespace mbl
