#include "mbl/families.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace mbl {

FunctionFamily::FunctionFamily(int domain_size, int label_count,
                               std::vector<std::vector<int>> rows,
                               std::vector<std::string> names)
    : domain_size_(domain_size), label_count_(label_count) {
  if (domain_size < 1) throw invalid_family_error("domain size must be >= 1");
  if (label_count < 1) throw invalid_family_error("label count must be >= 1");
  if (rows.empty()) throw invalid_family_error("family must be nonempty");
  table_.reserve(rows.size() * domain_size);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != domain_size)
      throw invalid_family_error("row length must equal domain size");
    for (int v : row) {
      if (v < 0 || v >= label_count)
        throw domain_error("label out of range in family row");
      table_.push_back(v);
    }
  }
  std::set<std::vector<int>> distinct(rows.begin(), rows.end());
  if (distinct.size() != rows.size())
    throw invalid_family_error("family rows must be pairwise distinct");
  if (names.empty()) {
    for (size_t i = 0; i < rows.size(); ++i) names.push_back("f" + std::to_string(i));
  } else if (names.size() != rows.size()) {
    throw invalid_family_error("name count must match row count");
  }
  names_ = std::move(names);
}

int FunctionFamily::eval(int h, int input) const {
  if (h < 0 || h >= size()) throw domain_error("hypothesis index out of range");
  if (input < 1 || input > domain_size_)
    throw domain_error("input outside domain [1, |X|]");
  return table_[static_cast<size_t>(h) * domain_size_ + (input - 1)];
}

std::vector<int> FunctionFamily::row(int h) const {
  if (h < 0 || h >= size()) throw domain_error("hypothesis index out of range");
  auto begin = table_.begin() + static_cast<size_t>(h) * domain_size_;
  return std::vector<int>(begin, begin + domain_size_);
}

bool FunctionFamily::rows_are_permutations() const {
  if (label_count_ != domain_size_) return false;
  std::vector<char> seen(domain_size_);
  for (int h = 0; h < size(); ++h) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int x = 1; x <= domain_size_; ++x) {
      int v = table_[static_cast<size_t>(h) * domain_size_ + (x - 1)];
      if (seen[v]) return false;
      seen[v] = 1;
    }
  }
  return true;
}

ThresholdFamily build_threshold_family(int domain_size,
                                       std::vector<int> thresholds) {
  if (domain_size < 1) throw invalid_family_error("domain size must be >= 1");
  if (thresholds.empty()) throw invalid_family_error("need at least one threshold");
  for (size_t i = 0; i < thresholds.size(); ++i) {
    if (thresholds[i] < 1 || thresholds[i] > domain_size + 1)
      throw invalid_family_error("threshold outside [1, |X|+1]");
    if (i > 0 && thresholds[i] <= thresholds[i - 1])
      throw invalid_family_error("thresholds must be strictly increasing");
  }
  return ThresholdFamily{domain_size, std::move(thresholds)};
}

FunctionFamily ThresholdFamily::materialize() const {
  std::vector<std::vector<int>> rows;
  std::vector<std::string> names;
  rows.reserve(thresholds.size());
  for (int a : thresholds) {
    std::vector<int> row(domain_size);
    for (int x = 1; x <= domain_size; ++x) row[x - 1] = x >= a ? 1 : 0;
    rows.push_back(std::move(row));
    names.push_back("a=" + std::to_string(a));
  }
  return FunctionFamily(domain_size, 2, std::move(rows), std::move(names));
}

ThresholdFamily spread_threshold_family(int m) {
  if (m < 1) throw invalid_family_error("family size must be >= 1");
  std::vector<int> thresholds(m);
  for (int i = 0; i < m; ++i) thresholds[i] = 2 * i + 1;
  return build_threshold_family(2 * m, std::move(thresholds));
}

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; static_cast<long long>(d) * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

long long ipow(long long base, int exp) {
  long long out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

LinearFamily build_linear_family(int modulus, int dimension, bool restricted) {
  if (!is_prime(modulus))
    throw invalid_family_error("linear family modulus must be prime");
  if (dimension < 1) throw invalid_family_error("dimension must be >= 1");
  if (restricted && modulus < 2)
    throw invalid_family_error("restricted coefficients need modulus >= 2");
  return LinearFamily{modulus, dimension, restricted};
}

long long LinearFamily::size() const {
  return ipow(restricted ? modulus - 1 : modulus, dimension);
}

long long LinearFamily::domain_points() const { return ipow(modulus, dimension); }

std::vector<int> LinearFamily::coefficient(long long index) const {
  if (index < 0 || index >= size())
    throw domain_error("coefficient index out of range");
  std::vector<int> out(dimension);
  int base = restricted ? modulus - 1 : modulus;
  int shift = restricted ? 1 : 0;
  for (int i = 0; i < dimension; ++i) {
    out[i] = static_cast<int>(index % base) + shift;
    index /= base;
  }
  return out;
}

std::vector<int> LinearFamily::domain_point(long long index) const {
  if (index < 1 || index > domain_points())
    throw domain_error("domain point index outside [1, p^n]");
  --index;
  std::vector<int> out(dimension);
  for (int i = 0; i < dimension; ++i) {
    out[i] = static_cast<int>(index % modulus);
    index /= modulus;
  }
  return out;
}

int LinearFamily::eval_vector(const std::vector<int>& coeff,
                              const std::vector<int>& point) const {
  long long acc = 0;
  for (int i = 0; i < dimension; ++i) acc += static_cast<long long>(coeff[i]) * point[i];
  return static_cast<int>(acc % modulus);
}

FunctionFamily LinearFamily::materialize(long long max_rows) const {
  if (size() > max_rows)
    throw size_cap_error("linear family too large to materialize");
  std::vector<std::vector<int>> rows;
  std::vector<std::string> names;
  long long dom = domain_points();
  for (long long a = 0; a < size(); ++a) {
    std::vector<int> coeff = coefficient(a);
    std::vector<int> row(dom);
    for (long long x = 1; x <= dom; ++x)
      row[x - 1] = eval_vector(coeff, domain_point(x));
    rows.push_back(std::move(row));
    std::string nm = "a=(";
    for (int i = 0; i < dimension; ++i)
      nm += (i ? "," : "") + std::to_string(coeff[i]);
    names.push_back(nm + ")");
  }
  return FunctionFamily(static_cast<int>(dom), modulus, std::move(rows),
                        std::move(names));
}

PermutationFamily build_permutation_family(int n, int max_n) {
  if (n < 1) throw invalid_family_error("n must be >= 1");
  if (n > max_n) throw size_cap_error("permutation family enumeration cap exceeded");
  std::vector<int> id(n);
  std::iota(id.begin(), id.end(), 1);
  PermutationFamily fam{n, {}, std::nullopt};
  std::vector<int> cur = id;
  do {
    fam.perms.push_back(cur);
  } while (std::next_permutation(cur.begin(), cur.end()));
  return fam;
}

PermutationFamily build_avoiding_family(int n, std::vector<int> pattern,
                                        int max_n) {
  std::vector<int> sorted = pattern;
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != static_cast<int>(i) + 1)
      throw domain_error("pattern must be a permutation of 1..k");
  PermutationFamily all = build_permutation_family(n, max_n);
  PermutationFamily fam{n, {}, pattern};
  for (auto& perm : all.perms)
    if (!contains_pattern(perm, pattern)) fam.perms.push_back(perm);
  if (fam.perms.empty())
    throw invalid_family_error("avoiding family is empty");
  return fam;
}

FunctionFamily PermutationFamily::materialize() const {
  std::vector<std::vector<int>> rows;
  std::vector<std::string> names;
  rows.reserve(perms.size());
  for (const auto& perm : perms) {
    std::vector<int> row(n);
    for (int x = 1; x <= n; ++x) row[x - 1] = perm[x - 1] - 1;
    rows.push_back(std::move(row));
    std::string nm;
    for (int v : perm) nm += (nm.empty() ? "" : ",") + std::to_string(v);
    names.push_back(nm);
  }
  return FunctionFamily(n, n, std::move(rows), std::move(names));
}

std::vector<int> pattern_of(const std::vector<int>& values) {
  std::vector<int> out(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    int rank = 1;
    for (size_t j = 0; j < values.size(); ++j) {
      if (i == j) continue;
      if (values[j] == values[i])
        throw domain_error("pattern_of needs distinct values");
      if (values[j] < values[i]) ++rank;
    }
    out[i] = rank;
  }
  return out;
}

namespace {

bool contains_rec(const std::vector<int>& perm, const std::vector<int>& pattern,
                  size_t perm_pos, std::vector<int>& picked) {
  if (picked.size() == pattern.size())
    return pattern_of(picked) == pattern;
  if (perm.size() - perm_pos < pattern.size() - picked.size()) return false;
  for (size_t i = perm_pos; i < perm.size(); ++i) {
    picked.push_back(perm[i]);
    if (contains_rec(perm, pattern, i + 1, picked)) return true;
    picked.pop_back();
  }
  return false;
}

}  // namespace

bool contains_pattern(const std::vector<int>& perm,
                      const std::vector<int>& pattern) {
  if (perm.size() > 12) throw size_cap_error("pattern containment capped at 12 elements");
  if (pattern.empty()) return true;
  if (pattern.size() > perm.size()) return false;
  std::vector<int> picked;
  return contains_rec(perm, pattern, 0, picked);
}

FunctionFamily cart_materialize(const FunctionFamily& family, int r,
                                long long max_rows, long long max_domain) {
  if (r < 1) throw domain_error("r must be >= 1");
  if (family.size() > max_rows) throw size_cap_error("too many hypotheses for CART materialization");
  long long dom = 1, labels = 1;
  for (int i = 0; i < r; ++i) {
    dom *= family.domain_size();
    labels *= family.label_count();
    if (dom > max_domain || labels > max_domain)
      throw size_cap_error("CART domain/label space cap exceeded");
  }
  std::vector<std::vector<int>> rows;
  std::vector<std::string> names;
  for (int h = 0; h < family.size(); ++h) {
    std::vector<int> row(dom);
    for (long long q = 0; q < dom; ++q) {
      long long rest = q, code = 0, mul = 1;
      for (int i = 0; i < r; ++i) {
        int x = static_cast<int>(rest % family.domain_size()) + 1;
        rest /= family.domain_size();
        code += mul * family.eval(h, x);
        mul *= family.label_count();
      }
      row[q] = static_cast<int>(code);
    }
    rows.push_back(std::move(row));
    names.push_back(family.name(h));
  }
  return FunctionFamily(static_cast<int>(dom), static_cast<int>(labels),
                        std::move(rows), std::move(names));
}

std::vector<int> cart_product_eval(const FunctionFamily& family, int h,
                                   const std::vector<int>& inputs) {
  std::vector<int> out;
  out.reserve(inputs.size());
  for (int x : inputs) out.push_back(family.eval(h, x));
  return out;
}

void write_family(std::ostream& os, const FunctionFamily& family,
                  const std::string& kind, const std::string& params) {
  os << "family " << kind << ' ' << family.domain_size() << ' '
     << family.label_count() << ' ' << family.size() << '\n';
  if (!params.empty()) os << params << '\n';
  for (int h = 0; h < family.size(); ++h) {
    for (int x = 1; x <= family.domain_size(); ++x)
      os << (x > 1 ? " " : "") << family.eval(h, x);
    os << '\n';
  }
}

void write_family(std::ostream& os, const ThresholdFamily& family) {
  std::string params = "thresholds";
  for (int a : family.thresholds) params += " " + std::to_string(a);
  write_family(os, family.materialize(), "threshold", params);
}

void write_family(std::ostream& os, const LinearFamily& family) {
  std::string params = "modulus " + std::to_string(family.modulus) + " dimension " +
                       std::to_string(family.dimension) + " restricted " +
                       (family.restricted ? "1" : "0");
  write_family(os, family.materialize(), "linear", params);
}

void write_family(std::ostream& os, const PermutationFamily& family) {
  std::string params = "n " + std::to_string(family.n);
  if (family.avoided) {
    params += " avoid";
    for (int v : *family.avoided) params += " " + std::to_string(v);
  }
  write_family(os, family.materialize(), "permutation", params);
}

FunctionFamily read_family(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw invalid_family_error("empty family stream");
  std::istringstream head(line);
  std::string tag, kind;
  int dom = 0, labels = 0, count = 0;
  head >> tag >> kind >> dom >> labels >> count;
  if (tag != "family" || dom < 1 || labels < 1 || count < 1)
    throw invalid_family_error("malformed family header");
  if (kind != "generic") {
    if (!std::getline(is, line))
      throw invalid_family_error("missing parameter line for kind " + kind);
  }
  std::vector<std::vector<int>> rows;
  for (int i = 0; i < count; ++i) {
    if (!std::getline(is, line)) throw invalid_family_error("truncated family rows");
    std::istringstream row_in(line);
    std::vector<int> row;
    int v;
    while (row_in >> v) row.push_back(v);
    rows.push_back(std::move(row));
  }
  return FunctionFamily(dom, labels, std::move(rows));
}

}  // namespace mbl
