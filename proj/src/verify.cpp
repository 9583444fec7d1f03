#include "mbl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace mbl {

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; static_cast<long long>(d) * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

long long ipow_ll(long long base, int exp) {
  long long out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

void require_prime(int p) {
  if (!is_prime(p)) throw precondition_error("modulus must be prime");
}

void require_nonzero_coords(const std::vector<int>& v, int p, const char* who) {
  for (int c : v)
    if (c < 1 || c > p - 1)
      throw precondition_error(std::string(who) +
                               " must have all coordinates in {1..p-1}");
}

bool is_scalar_multiple(const std::vector<int>& s, const std::vector<int>& t,
                        int p) {
  for (int c = 1; c < p; ++c) {
    bool all = true;
    for (size_t i = 0; i < s.size(); ++i)
      if ((static_cast<long long>(c) * s[i]) % p != t[i] % p) {
        all = false;
        break;
      }
    if (all) return true;
  }
  return false;
}

// Odometer over r vectors in {0..p-1}^n; calls fn once per input tuple.
template <typename Fn>
void for_each_tuple(int p, int n, int r, Fn&& fn) {
  std::vector<std::vector<int>> u(r, std::vector<int>(n, 0));
  while (true) {
    fn(u);
    int i = 0, j = 0;
    for (;;) {
      if (++u[i][j] < p) break;
      u[i][j] = 0;
      if (++j == n) {
        j = 0;
        if (++i == r) return;
      }
    }
  }
}

int dot_mod(const std::vector<int>& a, const std::vector<int>& b, int p) {
  long long acc = 0;
  for (size_t i = 0; i < a.size(); ++i)
    acc += static_cast<long long>(a[i]) * b[i];
  return static_cast<int>(acc % p);
}

constexpr long long kTupleCap = 10'000'000;

}  // namespace

int v_floor_log2(long long n) {
  if (n < 1) throw precondition_error("v(n) needs n >= 1");
  int v = 0;
  while ((1LL << (v + 1)) <= n) ++v;
  return v;
}

long long p_direct(long long n) {
  if (n < 1) throw precondition_error("p(n) needs n >= 1");
  long long total = 0;
  for (long long m = 1; m <= n; ++m) total += v_floor_log2(m);
  return total;
}

long long p_closed(long long n) {
  if (n < 1) throw precondition_error("p(n) needs n >= 1");
  long long v = v_floor_log2(n);
  return (n + 1) * v - 2 * ((1LL << v) - 1);
}

Rational make_rational(long long num, long long den) {
  if (den == 0) throw precondition_error("rational with zero denominator");
  if (num < 0 || den < 0) throw precondition_error("rational must be nonnegative");
  long long g = std::gcd(num, den);
  if (g == 0) return Rational{0, 1};
  return Rational{num / g, den / g};
}

std::string to_string(const Rational& r) {
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

Rational check_uniformity(int p, int n, int r, const std::vector<int>& s,
                          const std::vector<int>& z) {
  require_prime(p);
  if (n < 1 || r < 1) throw precondition_error("need n >= 1 and r >= 1");
  if (static_cast<int>(s.size()) != n) throw precondition_error("s must have n coordinates");
  if (static_cast<int>(z.size()) != r) throw precondition_error("z must have r coordinates");
  require_nonzero_coords(s, p, "s");
  for (int zi : z)
    if (zi < 0 || zi >= p) throw precondition_error("z entries must lie in [0, p)");
  long long space = 1;
  for (int i = 0; i < n * r; ++i) {
    space *= p;
    if (space > kTupleCap) throw size_cap_error("p^{nr} exceeds enumeration cap");
  }
  long long hits = 0;
  for_each_tuple(p, n, r, [&](const std::vector<std::vector<int>>& u) {
    for (int i = 0; i < r; ++i)
      if (dot_mod(s, u[i], p) != z[i]) return;
    ++hits;
  });
  return make_rational(hits, space);
}

Rational check_conditional(int p, int n, int r, const std::vector<int>& s,
                           const std::vector<int>& t, const std::vector<int>& z) {
  require_prime(p);
  if (n < 1 || r < 1) throw precondition_error("need n >= 1 and r >= 1");
  if (static_cast<int>(s.size()) != n || static_cast<int>(t.size()) != n)
    throw precondition_error("s and t must have n coordinates");
  if (static_cast<int>(z.size()) != r) throw precondition_error("z must have r coordinates");
  require_nonzero_coords(s, p, "s");
  require_nonzero_coords(t, p, "t");
  if (is_scalar_multiple(s, t, p))
    throw precondition_error("t must not be a scalar multiple of s mod p");
  for (int zi : z)
    if (zi < 0 || zi >= p) throw precondition_error("z entries must lie in [0, p)");
  long long space = 1;
  for (int i = 0; i < n * r; ++i) {
    space *= p;
    if (space > kTupleCap) throw size_cap_error("p^{nr} exceeds enumeration cap");
  }
  long long cond = 0, both = 0;
  for_each_tuple(p, n, r, [&](const std::vector<std::vector<int>>& u) {
    for (int i = 0; i < r; ++i)
      if (dot_mod(s, u[i], p) != z[i]) return;
    ++cond;
    for (int i = 0; i < r; ++i)
      if (dot_mod(t, u[i], p) != z[i]) return;
    ++both;
  });
  if (cond == 0) throw precondition_error("conditioning event is empty");
  return make_rational(both, cond);
}

BucketTable bucket_counts(int p, int n, int r,
                          const std::vector<std::vector<int>>& u,
                          const std::vector<std::vector<int>>& survivors) {
  require_prime(p);
  if (static_cast<int>(u.size()) != r) throw precondition_error("u must hold r vectors");
  for (const auto& ui : u) {
    if (static_cast<int>(ui.size()) != n)
      throw precondition_error("each u_i must have n coordinates");
    for (int c : ui)
      if (c < 0 || c >= p) throw precondition_error("u entries must lie in [0, p)");
  }
  long long buckets = ipow_ll(p, r);
  if (buckets > kTupleCap) throw size_cap_error("p^r bucket cap exceeded");
  BucketTable table;
  table.u = u;
  table.counts.assign(buckets, 0);
  for (const auto& a : survivors) {
    if (static_cast<int>(a.size()) != n)
      throw precondition_error("survivor vectors must have n coordinates");
    require_nonzero_coords(a, p, "survivor");
    long long code = 0, mul = 1;
    for (int i = 0; i < r; ++i) {
      code += mul * dot_mod(a, u[i], p);
      mul *= p;
    }
    ++table.counts[code];
  }
  table.total = static_cast<long long>(survivors.size());
  table.max_count = *std::max_element(table.counts.begin(), table.counts.end());
  return table;
}

double bucket_bound(long long survivor_count, int p, int r) {
  return static_cast<double>(survivor_count) / ipow_ll(p, r) +
         2.0 * std::sqrt(static_cast<double>(survivor_count));
}

BucketTable find_good_u(int p, int n, int r,
                        const std::vector<std::vector<int>>& survivors,
                        std::mt19937_64& rng, int budget) {
  if (budget < 1) throw precondition_error("attempt budget must be >= 1");
  double bound = bucket_bound(static_cast<long long>(survivors.size()), p, r);
  std::uniform_int_distribution<int> digit(0, p - 1);
  std::optional<BucketTable> best;
  for (int attempt = 0; attempt < budget; ++attempt) {
    std::vector<std::vector<int>> u(r, std::vector<int>(n));
    for (auto& ui : u)
      for (int& c : ui) c = digit(rng);
    BucketTable table = bucket_counts(p, n, r, u, survivors);
    if (static_cast<double>(table.max_count) <= bound) return table;
    if (!best || table.max_count < best->max_count) best = std::move(table);
  }
  throw search_failure("no sampled input tuple met the bucket bound", *best);
}

std::vector<std::vector<int>> restricted_vectors(int p, int n) {
  require_prime(p);
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 1);
  while (true) {
    out.push_back(cur);
    int i = 0;
    for (;;) {
      if (++cur[i] <= p - 1) break;
      cur[i] = 1;
      if (++i == n) return out;
    }
  }
}

int ceil_identity_violations() {
  auto ceil_div = [](long long a, long long b) { return (a + b - 1) / b; };
  int violations = 0;
  for (long long num = 1; num <= 100; ++num)
    for (long long den = 1; den <= 10; ++den)
      for (long long n = 1; n <= 10; ++n) {
        // x = num/den; lhs = ceil(ceil(x)/n), rhs = ceil(x/n) = ceil(num/(den*n)).
        long long lhs = ceil_div(ceil_div(num, den), n);
        long long rhs = ceil_div(num, den * n);
        if (lhs != rhs) ++violations;
      }
  return violations;
}

long long int_log_cap(long long num, long long den, long long value) {
  if (num <= den || den < 1) throw precondition_error("log base must exceed 1");
  if (value < 1) throw precondition_error("log argument must be >= 1");
  using big = __int128;
  big lhs = 1, rhs = value;
  constexpr big kGuard = static_cast<big>(1) << 120;
  long long m = 0;
  while (true) {
    if (lhs > kGuard / num || rhs > kGuard / den) {
      // Exact powers no longer fit; the long double estimate is safe here.
      long double est = std::log(static_cast<long double>(value)) /
                        (std::log(static_cast<long double>(num)) -
                         std::log(static_cast<long double>(den)));
      return static_cast<long long>(std::floor(est + 1e-9L));
    }
    lhs *= num;
    rhs *= den;
    if (lhs > rhs) return m;
    ++m;
  }
}

double expert_pool_alpha(int label_count, int r) {
  if (label_count < 2) throw precondition_error("pool expressions need k >= 2 (ln k = 0 at k = 1)");
  if (r < 1) throw precondition_error("r must be >= 1");
  double kr = std::pow(static_cast<double>(label_count), r);
  return 1.0 / (kr * std::log(static_cast<double>(label_count)));
}

std::vector<BoundEntry> bound_table(const BoundParams& params) {
  if (params.r < 1) throw precondition_error("r must be >= 1");
  const long long F = params.family_size;
  const int r = params.r;
  std::vector<BoundEntry> out;
  auto log_ratio = [](long long num, long long den, long long value) {
    return std::log(static_cast<double>(value)) /
           (std::log(static_cast<double>(num)) - std::log(static_cast<double>(den)));
  };
  if (F >= 1) {
    out.push_back({"cart_weak_cap", log_ratio(r + 1, r, F), int_log_cap(r + 1, r, F)});
    out.push_back({"cart_weak_ln", (r + 1) * std::log(static_cast<double>(F)), -1});
    long long two_r = 1LL << r;
    out.push_back({"amb_cap", log_ratio(two_r, two_r - 1, F), int_log_cap(two_r, two_r - 1, F)});
    out.push_back({"amb_ln", static_cast<double>(two_r) * std::log(static_cast<double>(F)), -1});
    out.push_back({"eliminate_one", static_cast<double>(F - 1), F - 1});
    if (r >= 2) {
      long long rfact = 1;
      for (int i = 2; i <= r; ++i) rfact *= i;
      out.push_back({"order_cap", log_ratio(rfact, rfact - 1, F), int_log_cap(rfact, rfact - 1, F)});
      out.push_back({"order_ln", static_cast<double>(rfact) * std::log(static_cast<double>(F)), -1});
      out.push_back({"selection_cap", log_ratio(r, r - 1, F), int_log_cap(r, r - 1, F)});
      out.push_back({"selection_ln", r * std::log(static_cast<double>(F)), -1});
    }
    out.push_back({"comparison_cap", log_ratio(two_r, two_r - 1, F), int_log_cap(two_r, two_r - 1, F)});
    out.push_back({"comparison_ln", static_cast<double>(two_r) * std::log(static_cast<double>(F)), -1});
    out.push_back({"relpos_cap", log_ratio(r + 1, r, F), int_log_cap(r + 1, r, F)});
    out.push_back({"relpos_ln", (r + 1) * std::log(static_cast<double>(F)), -1});
  }
  if (params.n > 0)
    out.push_back({"insertion_pn", static_cast<double>(p_closed(params.n)), p_closed(params.n)});
  if (params.base_mistakes > 0) {
    const int k = params.label_count;
    double alpha = expert_pool_alpha(k, r);  // throws for k < 2
    double kr = std::pow(static_cast<double>(k), r);
    double M = static_cast<double>(params.base_mistakes);
    out.push_back({"std_reduction", kr * r * std::log(static_cast<double>(k)) * M, -1});
    out.push_back({"pool_cap", std::log(1.0 / alpha) * M / (1.0 / kr - alpha), -1});
  }
  return out;
}

void write_bound_csv(std::ostream& os, const std::vector<BoundEntry>& entries) {
  os << "# mbl-csv v1\n";
  os << "name,value,cap\n";
  char buf[64];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof(buf), "%.12g", e.value);
    os << e.name << ',' << buf << ',' << e.cap << '\n';
  }
}

}  // namespace mbl
