#ifndef POLYFREE_MATRIX_HPP_
#define POLYFREE_MATRIX_HPP_

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyfree {

// All integer arithmetic in this module is exact: operations throw
// ArithmeticOverflow instead of wrapping.
struct ArithmeticOverflow : std::overflow_error {
  ArithmeticOverflow() : std::overflow_error("integer overflow in exact arithmetic") {}
};

long long checked_add(long long a, long long b);
long long checked_sub(long long a, long long b);
long long checked_mul(long long a, long long b);
long long checked_neg(long long a);

/// Dense matrix over Z with row-major storage. Row form throughout: the
/// matrix of a morphism has the image of the i-th generator as row i.
class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(int rows, int cols);
  IntMatrix(int rows, int cols, std::vector<long long> entries);

  static IntMatrix identity(int n);
  static IntMatrix zero(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  long long at(int r, int c) const { return entries_[index(r, c)]; }
  long long& at(int r, int c) { return entries_[index(r, c)]; }

  bool is_square() const { return rows_ == cols_; }
  bool operator==(const IntMatrix& other) const;
  bool operator!=(const IntMatrix& other) const { return !(*this == other); }

 private:
  size_t index(int r, int c) const;
  int rows_, cols_;
  std::vector<long long> entries_;
};

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);

/// Exact determinant (fraction-free Bareiss elimination).
long long determinant(const IntMatrix& m);

// Matrix literal syntax: rows separated by ';', entries by whitespace,
// e.g. "1 -2; 0 1".
IntMatrix parse_matrix(const std::string& text);
std::string format_matrix(const IntMatrix& m);

/// U * M * V = D with U, V unimodular and D diagonal, nonnegative,
/// d1 | d2 | ... along the diagonal.
struct SmithDecomposition {
  IntMatrix u, d, v;
};

SmithDecomposition smith_normal_form(const IntMatrix& m);

/// Finitely generated abelian group Z^free_rank + Z/t1 + Z/t2 + ... with
/// t1 | t2 | ... and every ti >= 2.
struct AbelianGroupStructure {
  long long free_rank = 0;
  std::vector<long long> torsion;

  bool is_trivial() const { return free_rank == 0 && torsion.empty(); }
  bool is_finite() const { return free_rank == 0; }
  long long order() const;  // only valid when finite
  std::string to_string() const;
  bool operator==(const AbelianGroupStructure& other) const {
    return free_rank == other.free_rank && torsion == other.torsion;
  }
};

/// Structure of Z^n / (column lattice of M), M square.
AbelianGroupStructure cokernel_structure(const IntMatrix& m);

/// Reidemeister count of the endomorphism of Z^n given by M:
/// |coker(I - M)|, infinite iff det(I - M) = 0.
struct ReidemeisterCount {
  bool infinite = false;
  long long value = 0;  // meaningful only when !infinite

  static ReidemeisterCount inf() { return {true, 0}; }
  static ReidemeisterCount finite(long long v) { return {false, v}; }
  std::string to_string() const;
  bool operator==(const ReidemeisterCount& other) const {
    return infinite == other.infinite && (infinite || value == other.value);
  }
};

ReidemeisterCount abelian_reidemeister(const IntMatrix& m);

/// True iff ker(M - I) = 0, i.e. the fixed sublattice of M is trivial.
bool fixed_sublattice_trivial(const IntMatrix& m);

/// Finitely supported Z-linear combination of basis vectors e_i, i in Z.
/// Never stores zero coefficients.
class SupportedVector {
 public:
  SupportedVector() = default;
  static SupportedVector basis(long long index, long long coeff = 1);

  void add(long long index, long long coeff);
  long long coeff(long long index) const;
  bool is_zero() const { return coeffs_.empty(); }
  const std::map<long long, long long>& terms() const { return coeffs_; }

  SupportedVector operator+(const SupportedVector& other) const;
  SupportedVector operator-(const SupportedVector& other) const;
  SupportedVector scaled(long long c) const;
  bool operator==(const SupportedVector& other) const { return coeffs_ == other.coeffs_; }
  bool operator!=(const SupportedVector& other) const { return !(*this == other); }

  std::string to_string() const;

 private:
  std::map<long long, long long> coeffs_;
};

/// Linear extension of per-index images. Throws if some index in the
/// support of v has no image.
SupportedVector supported_apply(
    const std::map<long long, SupportedVector>& images, const SupportedVector& v);

/// Quotient of Z^n by the lattice spanned by the rows of a matrix, with
/// canonical residues computed in Smith coordinates: two vectors reduce
/// equal iff they lie in the same coset.
class LatticeQuotient {
 public:
  /// row_lattice: any matrix with n columns; its rows span the lattice.
  LatticeQuotient(int n, const IntMatrix& row_lattice);

  int dimension() const { return n_; }
  const AbelianGroupStructure& structure() const { return structure_; }
  std::vector<long long> reduce(const std::vector<long long>& v) const;

 private:
  int n_;
  IntMatrix u_;
  std::vector<long long> diag_;
  AbelianGroupStructure structure_;
};

/// Minimal unsigned big integer: enough for products and powers that the
/// series-count bound needs. Base 10^9 limbs, little-endian.
class BigUint {
 public:
  BigUint() : limbs_{0} {}
  explicit BigUint(unsigned long long v);

  static BigUint pow(const BigUint& base, unsigned long long exp);
  BigUint operator*(const BigUint& other) const;
  bool operator==(const BigUint& other) const { return limbs_ == other.limbs_; }

  std::string to_string() const;

 private:
  void trim();
  std::vector<uint32_t> limbs_;
};

}  // namespace polyfree

#endif  // POLYFREE_MATRIX_HPP_
