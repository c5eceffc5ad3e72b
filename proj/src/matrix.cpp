#include "polyfree/matrix.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace polyfree {

long long checked_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow();
  return r;
}

long long checked_sub(long long a, long long b) {
  long long r;
  if (__builtin_sub_overflow(a, b, &r)) throw ArithmeticOverflow();
  return r;
}

long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow();
  return r;
}

long long checked_neg(long long a) { return checked_sub(0, a); }

IntMatrix::IntMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("matrix dimensions must be positive");
  entries_.assign(static_cast<size_t>(rows) * cols, 0);
}

IntMatrix::IntMatrix(int rows, int cols, std::vector<long long> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("matrix dimensions must be positive");
  if (entries_.size() != static_cast<size_t>(rows) * cols)
    throw std::invalid_argument("entry count does not match dimensions");
}

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::zero(int rows, int cols) { return IntMatrix(rows, cols); }

size_t IntMatrix::index(int r, int c) const {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
    throw std::out_of_range("matrix index out of range");
  return static_cast<size_t>(r) * cols_ + c;
}

bool IntMatrix::operator==(const IntMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && entries_ == other.entries_;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix shape mismatch");
  IntMatrix r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = checked_add(a.at(i, j), b.at(i, j));
  return r;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix shape mismatch");
  IntMatrix r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = checked_sub(a.at(i, j), b.at(i, j));
  return r;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch");
  IntMatrix r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      long long acc = 0;
      for (int k = 0; k < a.cols(); ++k)
        acc = checked_add(acc, checked_mul(a.at(i, k), b.at(k, j)));
      r.at(i, j) = acc;
    }
  return r;
}

long long determinant(const IntMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("determinant requires a square matrix");
  const int n = m.rows();
  IntMatrix a = m;
  long long sign = 1;
  long long prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a.at(k, k) == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i)
        if (a.at(i, k) != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(swap, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        long long num = checked_sub(checked_mul(a.at(i, j), a.at(k, k)),
                                    checked_mul(a.at(i, k), a.at(k, j)));
        a.at(i, j) = num / prev;  // Bareiss: division is exact
      }
    prev = a.at(k, k);
  }
  return checked_mul(sign, a.at(n - 1, n - 1));
}

IntMatrix parse_matrix(const std::string& text) {
  std::vector<std::vector<long long>> rows;
  std::stringstream whole(text);
  std::string row_text;
  while (std::getline(whole, row_text, ';')) {
    std::stringstream row_stream(row_text);
    std::vector<long long> row;
    long long v;
    while (row_stream >> v) row.push_back(v);
    std::string rest;
    row_stream.clear();
    if (row_stream >> rest && !rest.empty())
      throw std::invalid_argument("bad matrix entry: '" + rest + "'");
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("empty matrix literal");
  const size_t cols = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != cols) throw std::invalid_argument("ragged matrix literal");
  std::vector<long long> flat;
  for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  return IntMatrix(static_cast<int>(rows.size()), static_cast<int>(cols), std::move(flat));
}

std::string format_matrix(const IntMatrix& m) {
  std::string out;
  for (int i = 0; i < m.rows(); ++i) {
    if (i) out += "; ";
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      out += std::to_string(m.at(i, j));
    }
  }
  return out;
}

namespace {

// Pivot choice: smallest nonzero absolute value in the remaining block,
// ties broken by row-major position.
bool find_pivot(const IntMatrix& d, int k, int* pr, int* pc) {
  long long best = 0;
  *pr = -1;
  for (int i = k; i < d.rows(); ++i)
    for (int j = k; j < d.cols(); ++j) {
      long long v = d.at(i, j);
      if (v == 0) continue;
      long long a = v < 0 ? -v : v;
      if (*pr < 0 || a < best) {
        best = a;
        *pr = i;
        *pc = j;
      }
    }
  return *pr >= 0;
}

void swap_rows(IntMatrix& m, int a, int b) {
  if (a == b) return;
  for (int j = 0; j < m.cols(); ++j) std::swap(m.at(a, j), m.at(b, j));
}

void swap_cols(IntMatrix& m, int a, int b) {
  if (a == b) return;
  for (int i = 0; i < m.rows(); ++i) std::swap(m.at(i, a), m.at(i, b));
}

// row[a] += q * row[b]
void add_row(IntMatrix& m, int a, int b, long long q) {
  for (int j = 0; j < m.cols(); ++j)
    m.at(a, j) = checked_add(m.at(a, j), checked_mul(q, m.at(b, j)));
}

void add_col(IntMatrix& m, int a, int b, long long q) {
  for (int i = 0; i < m.rows(); ++i)
    m.at(i, a) = checked_add(m.at(i, a), checked_mul(q, m.at(i, b)));
}

void negate_row(IntMatrix& m, int a) {
  for (int j = 0; j < m.cols(); ++j) m.at(a, j) = checked_neg(m.at(a, j));
}

}  // namespace

namespace {

// quotient rounded to the nearest integer, so remainders stay <= |b|/2
long long nearest_quotient(long long a, long long b) {
  long long q = a / b, r = a % b;
  long long half = (b < 0 ? -b : b);
  if (2 * (r < 0 ? -r : r) > half)
    q += ((r < 0) == (b < 0)) ? 1 : -1;
  return q;
}

}  // namespace

SmithDecomposition smith_normal_form(const IntMatrix& m) {
  SmithDecomposition s{IntMatrix::identity(m.rows()), m, IntMatrix::identity(m.cols())};
  IntMatrix& d = s.d;
  const int n = std::min(m.rows(), m.cols());

  for (int k = 0; k < n; ++k) {
    for (;;) {
      int pr, pc;
      if (!find_pivot(d, k, &pr, &pc)) break;
      swap_rows(d, k, pr);
      swap_rows(s.u, k, pr);
      swap_cols(d, k, pc);
      swap_cols(s.v, k, pc);

      bool clean = true;
      for (int i = k + 1; i < d.rows(); ++i) {
        if (d.at(i, k) == 0) continue;
        long long q = nearest_quotient(d.at(i, k), d.at(k, k));
        add_row(d, i, k, checked_neg(q));
        add_row(s.u, i, k, checked_neg(q));
        if (d.at(i, k) != 0) clean = false;
      }
      for (int j = k + 1; j < d.cols(); ++j) {
        if (d.at(k, j) == 0) continue;
        long long q = nearest_quotient(d.at(k, j), d.at(k, k));
        add_col(d, j, k, checked_neg(q));
        add_col(s.v, j, k, checked_neg(q));
        if (d.at(k, j) != 0) clean = false;
      }
      if (!clean) continue;  // a smaller pivot appeared among the remainders

      // pivot must divide the rest of the block; fold an offending row in
      // and keep reducing
      bool fixed = true;
      for (int i = k + 1; i < d.rows() && fixed; ++i)
        for (int j = k + 1; j < d.cols() && fixed; ++j)
          if (d.at(i, j) % d.at(k, k) != 0) {
            add_row(d, k, i, 1);
            add_row(s.u, k, i, 1);
            fixed = false;
          }
      if (fixed) break;
    }
  }

  for (int k = 0; k < n; ++k)
    if (d.at(k, k) < 0) {
      negate_row(d, k);
      negate_row(s.u, k);
    }
  return s;
}

long long AbelianGroupStructure::order() const {
  if (!is_finite()) throw std::logic_error("order of an infinite group");
  long long o = 1;
  for (long long t : torsion) o = checked_mul(o, t);
  return o;
}

std::string AbelianGroupStructure::to_string() const {
  if (is_trivial()) return "0";
  std::string out;
  for (long long i = 0; i < free_rank; ++i) {
    if (!out.empty()) out += " + ";
    out += "Z";
  }
  for (long long t : torsion) {
    if (!out.empty()) out += " + ";
    out += "Z/" + std::to_string(t);
  }
  return out;
}

AbelianGroupStructure cokernel_structure(const IntMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("cokernel_structure requires a square matrix");
  SmithDecomposition s = smith_normal_form(m);
  AbelianGroupStructure g;
  for (int i = 0; i < m.rows(); ++i) {
    long long d = s.d.at(i, i);
    if (d == 0)
      ++g.free_rank;
    else if (d >= 2)
      g.torsion.push_back(d);
  }
  return g;
}

std::string ReidemeisterCount::to_string() const {
  return infinite ? "INFINITE" : std::to_string(value);
}

ReidemeisterCount abelian_reidemeister(const IntMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("abelian_reidemeister requires a square matrix");
  long long det = determinant(IntMatrix::identity(m.rows()) - m);
  if (det == 0) return ReidemeisterCount::inf();
  return ReidemeisterCount::finite(det < 0 ? -det : det);
}

bool fixed_sublattice_trivial(const IntMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("fixed_sublattice_trivial requires a square matrix");
  return determinant(m - IntMatrix::identity(m.rows())) != 0;
}

SupportedVector SupportedVector::basis(long long index, long long coeff) {
  SupportedVector v;
  v.add(index, coeff);
  return v;
}

void SupportedVector::add(long long index, long long coeff) {
  if (coeff == 0) return;
  long long& slot = coeffs_[index];
  slot = checked_add(slot, coeff);
  if (slot == 0) coeffs_.erase(index);
}

long long SupportedVector::coeff(long long index) const {
  auto it = coeffs_.find(index);
  return it == coeffs_.end() ? 0 : it->second;
}

SupportedVector SupportedVector::operator+(const SupportedVector& other) const {
  SupportedVector r = *this;
  for (const auto& [i, c] : other.coeffs_) r.add(i, c);
  return r;
}

SupportedVector SupportedVector::operator-(const SupportedVector& other) const {
  SupportedVector r = *this;
  for (const auto& [i, c] : other.coeffs_) r.add(i, checked_neg(c));
  return r;
}

SupportedVector SupportedVector::scaled(long long c) const {
  SupportedVector r;
  for (const auto& [i, v] : coeffs_) r.add(i, checked_mul(v, c));
  return r;
}

std::string SupportedVector::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (const auto& [i, c] : coeffs_) {
    if (out.empty()) {
      if (c == -1)
        out += "-";
      else if (c != 1)
        out += std::to_string(c) + " ";
    } else {
      out += c < 0 ? " - " : " + ";
      long long a = c < 0 ? -c : c;
      if (a != 1) out += std::to_string(a) + " ";
    }
    out += "e(" + std::to_string(i) + ")";
  }
  return out;
}

SupportedVector supported_apply(
    const std::map<long long, SupportedVector>& images, const SupportedVector& v) {
  SupportedVector out;
  for (const auto& [i, c] : v.terms()) {
    auto it = images.find(i);
    if (it == images.end())
      throw std::invalid_argument("supported_apply: no image for index " + std::to_string(i));
    out = out + it->second.scaled(c);
  }
  return out;
}

LatticeQuotient::LatticeQuotient(int n, const IntMatrix& row_lattice) : n_(n) {
  if (row_lattice.cols() != n)
    throw std::invalid_argument("lattice matrix must have n columns");
  // columns of the transpose span the lattice
  IntMatrix t(n, row_lattice.rows());
  for (int i = 0; i < row_lattice.rows(); ++i)
    for (int j = 0; j < n; ++j) t.at(j, i) = row_lattice.at(i, j);
  SmithDecomposition s = smith_normal_form(t);
  u_ = s.u;
  diag_.assign(n, 0);
  for (int i = 0; i < n && i < t.cols(); ++i) diag_[i] = s.d.at(i, i);
  for (long long d : diag_) {
    if (d == 0)
      ++structure_.free_rank;
    else if (d >= 2)
      structure_.torsion.push_back(d);
  }
}

std::vector<long long> LatticeQuotient::reduce(const std::vector<long long>& v) const {
  if (v.size() != static_cast<size_t>(n_))
    throw std::invalid_argument("vector dimension mismatch");
  std::vector<long long> y(n_, 0);
  for (int i = 0; i < n_; ++i) {
    long long acc = 0;
    for (int j = 0; j < n_; ++j) acc = checked_add(acc, checked_mul(u_.at(i, j), v[j]));
    y[i] = diag_[i] == 0 ? acc : ((acc % diag_[i]) + diag_[i]) % diag_[i];
  }
  return y;
}

namespace {
constexpr uint64_t kLimbBase = 1000000000ull;
}

BigUint::BigUint(unsigned long long v) {
  do {
    limbs_.push_back(static_cast<uint32_t>(v % kLimbBase));
    v /= kLimbBase;
  } while (v != 0);
}

void BigUint::trim() {
  while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
}

BigUint BigUint::operator*(const BigUint& other) const {
  BigUint r;
  r.limbs_.assign(limbs_.size() + other.limbs_.size(), 0);
  for (size_t i = 0; i < limbs_.size(); ++i) {
    uint64_t carry = 0;
    for (size_t j = 0; j < other.limbs_.size() || carry; ++j) {
      uint64_t cur = r.limbs_[i + j] + carry;
      if (j < other.limbs_.size())
        cur += static_cast<uint64_t>(limbs_[i]) * other.limbs_[j];
      r.limbs_[i + j] = static_cast<uint32_t>(cur % kLimbBase);
      carry = cur / kLimbBase;
    }
  }
  r.trim();
  return r;
}

BigUint BigUint::pow(const BigUint& base, unsigned long long exp) {
  BigUint result(1);
  BigUint b = base;
  while (exp) {
    if (exp & 1) result = result * b;
    b = b * b;
    exp >>= 1;
  }
  return result;
}

std::string BigUint::to_string() const {
  std::string out = std::to_string(limbs_.back());
  for (size_t i = limbs_.size(); i-- > 1;) {
    std::string part = std::to_string(limbs_[i - 1]);
    out += std::string(9 - part.size(), '0') + part;
  }
  return out;
}

}  // namespace polyfree
