#include "polyfree/matrix.hpp"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <random>

#include "doctest.h"

using namespace polyfree;

namespace {

IntMatrix m22(long long a, long long b, long long c, long long d) {
  return IntMatrix(2, 2, {a, b, c, d});
}

bool unimodular(const IntMatrix& m) {
  long long d = determinant(m);
  return d == 1 || d == -1;
}

bool divisibility_chain(const IntMatrix& d) {
  int n = std::min(d.rows(), d.cols());
  for (int i = 0; i + 1 < n; ++i) {
    long long a = d.at(i, i), b = d.at(i + 1, i + 1);
    if (a < 0 || b < 0) return false;
    if (a == 0 && b != 0) return false;
    if (a != 0 && b % a != 0) return false;
  }
  for (int i = 0; i < d.rows(); ++i)
    for (int j = 0; j < d.cols(); ++j)
      if (i != j && d.at(i, j) != 0) return false;
  return true;
}

// Independent cokernel-order oracle: orbits of translations by the columns
// of M inside (Z/m)^n, where m = |det M|. Valid because m Z^n lies inside
// the column lattice.
long long residue_count_oracle(const IntMatrix& m) {
  long long det = determinant(m);
  REQUIRE(det != 0);
  long long mod = det < 0 ? -det : det;
  const int n = m.rows();
  long long total = 1;
  for (int i = 0; i < n; ++i) total *= mod;
  std::vector<long long> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](long long i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  std::vector<long long> coords(n);
  for (long long idx = 0; idx < total; ++idx) {
    long long rest = idx;
    for (int i = 0; i < n; ++i) {
      coords[i] = rest % mod;
      rest /= mod;
    }
    for (int col = 0; col < n; ++col) {
      long long nidx = 0, mul = 1;
      for (int i = 0; i < n; ++i) {
        long long c = (coords[i] + m.at(i, col)) % mod;
        if (c < 0) c += mod;
        nidx += c * mul;
        mul *= mod;
      }
      long long a = find(idx), b = find(nidx);
      if (a != b) parent[a] = b;
    }
  }
  long long classes = 0;
  for (long long i = 0; i < total; ++i)
    if (find(i) == i) ++classes;
  return classes;
}

}  // namespace

TEST_CASE("checked arithmetic") {
  CHECK(checked_add(2, 3) == 5);
  CHECK_THROWS_AS(checked_mul((1ll << 62), 4), ArithmeticOverflow);
  CHECK_THROWS_AS(checked_add(INT64_MAX, 1), ArithmeticOverflow);
}

TEST_CASE("determinant") {
  CHECK(determinant(IntMatrix::identity(3)) == 1);
  CHECK(determinant(m22(2, 1, 1, 1)) == 1);
  CHECK(determinant(m22(0, 3, 0, 0)) == 0);
  CHECK(determinant(IntMatrix(3, 3, {2, 0, 1, 0, 3, 0, 1, 0, 1})) == 3);
}

TEST_CASE("smith normal form examples") {
  SUBCASE("identity") {
    SmithDecomposition s = smith_normal_form(IntMatrix::identity(2));
    CHECK(s.d == IntMatrix::identity(2));
  }
  SUBCASE("diag(2,3) has invariant factors 1, 6") {
    IntMatrix m = m22(2, 0, 0, 3);
    SmithDecomposition s = smith_normal_form(m);
    CHECK(s.u * m * s.v == s.d);
    // gcd oracle: d1 = gcd of entries, d1*d2 = |det|
    CHECK(s.d.at(0, 0) == 1);
    CHECK(s.d.at(1, 1) == 6);
    long long g = std::gcd(std::gcd(m.at(0, 0), m.at(0, 1)),
                           std::gcd(m.at(1, 0), m.at(1, 1)));
    CHECK(s.d.at(0, 0) == g);
    CHECK(s.d.at(0, 0) * s.d.at(1, 1) == 6);
  }
  SUBCASE("[[0,3],[0,0]] -> diag(3,0)") {
    IntMatrix m = m22(0, 3, 0, 0);
    SmithDecomposition s = smith_normal_form(m);
    CHECK(s.u * m * s.v == s.d);
    CHECK(s.d.at(0, 0) == 3);
    CHECK(s.d.at(1, 1) == 0);
  }
}

TEST_CASE("smith normal form on random 4x4 matrices") {
  std::mt19937_64 rng(8001);
  std::uniform_int_distribution<long long> entry(-10, 10);
  for (int trial = 0; trial < 1000; ++trial) {
    IntMatrix m(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m.at(i, j) = entry(rng);
    SmithDecomposition s = smith_normal_form(m);
    REQUIRE(s.u * m * s.v == s.d);
    REQUIRE(unimodular(s.u));
    REQUIRE(unimodular(s.v));
    REQUIRE(divisibility_chain(s.d));
  }
}

TEST_CASE("cokernel structure") {
  SUBCASE("2I on Z^2: order 4, enumerated directly") {
    IntMatrix m = m22(2, 0, 0, 2);
    AbelianGroupStructure g = cokernel_structure(m);
    CHECK(g.free_rank == 0);
    CHECK(g.torsion == std::vector<long long>{2, 2});
    CHECK(g.order() == 4);
    CHECK(residue_count_oracle(m) == 4);
  }
  SUBCASE("identity: trivial") {
    CHECK(cokernel_structure(IntMatrix::identity(2)).is_trivial());
  }
  SUBCASE("[[2,-1],[0,2]]: order 4 via diag(1,4)") {
    IntMatrix m = m22(2, -1, 0, 2);
    AbelianGroupStructure g = cokernel_structure(m);
    CHECK(g.free_rank == 0);
    CHECK(g.torsion == std::vector<long long>{4});
    CHECK(residue_count_oracle(m) == 4);
  }
}

TEST_CASE("abelian Reidemeister counts") {
  for (long long m = -2; m <= 2; ++m) {
    CHECK(abelian_reidemeister(m22(1, -m, 0, 1)).infinite);
    CHECK(abelian_reidemeister(m22(-1, m, 0, -1)) == ReidemeisterCount::finite(4));
  }
  CHECK(abelian_reidemeister(m22(2, 1, 1, 1)) == ReidemeisterCount::finite(1));
}

TEST_CASE("abelian count equals the residue oracle on random matrices") {
  std::mt19937_64 rng(8002);
  std::uniform_int_distribution<long long> entry(-2, 2);
  int done = 0;
  while (done < 60) {
    IntMatrix m(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m.at(i, j) = entry(rng);
    IntMatrix one_minus = IntMatrix::identity(3) - m;
    long long det = determinant(one_minus);
    if (det == 0 || det > 40 || det < -40) continue;
    ++done;
    ReidemeisterCount rc = abelian_reidemeister(m);
    REQUIRE_FALSE(rc.infinite);
    REQUIRE(rc.value == residue_count_oracle(one_minus));
  }
}

TEST_CASE("fixed sublattice test") {
  CHECK(fixed_sublattice_trivial(m22(-1, 1, 0, -1)));
  CHECK_FALSE(fixed_sublattice_trivial(IntMatrix::identity(2)));
  CHECK_FALSE(fixed_sublattice_trivial(m22(1, -3, 0, 1)));

  SUBCASE("agrees with a rational rank computation") {
    std::mt19937_64 rng(8003);
    std::uniform_int_distribution<long long> entry(-4, 4);
    for (int trial = 0; trial < 200; ++trial) {
      IntMatrix m(3, 3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m.at(i, j) = entry(rng);
      // Gaussian elimination over the rationals on M - I
      double a[3][4];
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = static_cast<double>(m.at(i, j)) - (i == j);
      int rank = 0;
      for (int col = 0; col < 3 && rank < 3; ++col) {
        int pivot = -1;
        for (int i = rank; i < 3; ++i)
          if (std::abs(a[i][col]) > 1e-9) {
            pivot = i;
            break;
          }
        if (pivot < 0) continue;
        std::swap(a[rank], a[pivot]);
        for (int i = 0; i < 3; ++i) {
          if (i == rank) continue;
          double f = a[i][col] / a[rank][col];
          for (int j = 0; j < 3; ++j) a[i][j] -= f * a[rank][j];
        }
        ++rank;
      }
      CHECK(fixed_sublattice_trivial(m) == (rank == 3));
    }
  }
}

TEST_CASE("supported vectors") {
  std::map<long long, SupportedVector> id_images;
  for (long long i = -2; i <= 2; ++i) id_images[i] = SupportedVector::basis(i);
  CHECK(supported_apply(id_images, SupportedVector::basis(0)) ==
        SupportedVector::basis(0));
  CHECK(supported_apply(id_images, SupportedVector::basis(0, 2)) ==
        SupportedVector::basis(0, 2));

  std::map<long long, SupportedVector> shift;
  for (long long i = -4; i <= 4; ++i) shift[i] = SupportedVector::basis(i + 1);
  SupportedVector v = SupportedVector::basis(0) - SupportedVector::basis(1);
  CHECK(supported_apply(shift, v) ==
        SupportedVector::basis(1) - SupportedVector::basis(2));

  CHECK_THROWS_AS(supported_apply({}, SupportedVector::basis(7)), std::invalid_argument);

  SUBCASE("linearity on random vectors") {
    std::mt19937_64 rng(8004);
    std::uniform_int_distribution<long long> idx(-3, 3), coeff(-5, 5);
    for (int trial = 0; trial < 100; ++trial) {
      SupportedVector u, w;
      for (int t = 0; t < 4; ++t) {
        u.add(idx(rng), coeff(rng));
        w.add(idx(rng), coeff(rng));
      }
      CHECK(supported_apply(shift, u + w) ==
            supported_apply(shift, u) + supported_apply(shift, w));
    }
  }

  CHECK(SupportedVector().to_string() == "0");
  SupportedVector pretty;
  pretty.add(-1, 1);
  pretty.add(0, -2);
  CHECK(pretty.to_string() == "e(-1) - 2 e(0)");
}

TEST_CASE("lattice quotients give canonical residues") {
  // Z^2 / <(2,0),(0,2)>: four residues
  LatticeQuotient q(2, m22(2, 0, 0, 2));
  CHECK(q.structure().torsion == std::vector<long long>{2, 2});
  std::set<std::vector<long long>> seen;
  for (long long x = -2; x <= 2; ++x)
    for (long long y = -2; y <= 2; ++y) seen.insert(q.reduce({x, y}));
  CHECK(seen.size() == 4);
  CHECK(q.reduce({0, 0}) == q.reduce({2, 2}));
  CHECK(q.reduce({1, 0}) != q.reduce({0, 1}));
}

TEST_CASE("matrix literals") {
  IntMatrix m = parse_matrix("1 -2; 0 1");
  CHECK(m == m22(1, -2, 0, 1));
  CHECK(format_matrix(m) == "1 -2; 0 1");
  CHECK_THROWS_AS(parse_matrix("1 2; 3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_matrix(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_matrix("1 x; 2 3"), std::invalid_argument);
}

TEST_CASE("big unsigned integers") {
  CHECK(BigUint(0).to_string() == "0");
  CHECK(BigUint::pow(BigUint(2), 10).to_string() == "1024");
  CHECK(BigUint::pow(BigUint(10), 12).to_string() == "1000000000000");
  CHECK((BigUint(123456789) * BigUint(987654321)).to_string() == "121932631112635269");
  // 65^136 needs 247 decimal digits
  CHECK(BigUint::pow(BigUint(65), 136).to_string().size() == 247);
}
