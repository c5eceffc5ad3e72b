#include "polyfree/twisted.hpp"

#include <algorithm>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace polyfree {

namespace {

struct UnionFind {
  std::vector<size_t> parent, size;

  explicit UnionFind(size_t n) : parent(n), size(n, 1) {
    for (size_t i = 0; i < n; ++i) parent[i] = i;
  }
  size_t find(size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(size_t i, size_t j) {
    size_t a = find(i), b = find(j);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
  size_t count_roots() {
    size_t n = 0;
    for (size_t i = 0; i < parent.size(); ++i)
      if (find(i) == i) ++n;
    return n;
  }
};

std::string vec_key(const std::vector<long long>& v) {
  std::string k;
  for (long long x : v) k += std::to_string(x) + ",";
  return k;
}

// Shared shape of the ball oracle: Model provides the ball, the twisted
// conjugate, a canonical key and the abelian invariant.
template <class Model>
OrbitReport orbit_report_impl(const Model& model, int ball_radius, int conjugator_radius,
                              int workers) {
  if (workers < 1) throw std::invalid_argument("worker count must be positive");
  auto ball = model.ball(ball_radius);
  auto conjugators = model.ball(conjugator_radius);

  std::unordered_map<std::string, size_t> index;
  index.reserve(ball.size() * 2);
  for (size_t i = 0; i < ball.size(); ++i) index.emplace(model.key(ball[i]), i);

  std::vector<std::vector<std::pair<size_t, size_t>>> edges(workers);
  auto work = [&](int wkr) {
    for (size_t s = wkr; s < conjugators.size(); s += workers) {
      for (size_t i = 0; i < ball.size(); ++i) {
        auto h = model.twisted(conjugators[s], ball[i]);
        auto it = index.find(model.key(h));
        if (it != index.end() && it->second != i) edges[wkr].push_back({i, it->second});
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int wkr = 0; wkr < workers; ++wkr) pool.emplace_back(work, wkr);
    for (auto& th : pool) th.join();
  }

  // the final partition depends only on the edge set, not on merge order
  UnionFind uf(ball.size());
  for (const auto& chunk : edges)
    for (auto [i, j] : chunk) uf.unite(i, j);

  std::unordered_set<std::string> invariants;
  for (const auto& e : ball) invariants.insert(model.invariant_key(e));

  OrbitReport report;
  report.ball_radius = ball_radius;
  report.conjugator_radius = conjugator_radius;
  report.ball_size = ball.size();
  report.class_upper_bound = uf.count_roots();
  report.invariant_lower_bound = invariants.size();
  return report;
}

IntMatrix pf_exponent_matrix(const PfGroup& g, const PfMorphism& f) {
  const int r = g.kernel_rank(), s = g.quotient_rank(), n = r + s;
  IntMatrix a(n, n);
  auto fill_row = [&](int row, const PfElement& image) {
    for (int i = 0; i < r; ++i) a.at(row, i) = exponent_sum(image.kernel, i);
    for (int j = 0; j < s; ++j) a.at(row, r + j) = exponent_sum(image.quotient, j);
  };
  for (int i = 0; i < r; ++i) fill_row(i, f.kernel_images[i]);
  for (int j = 0; j < s; ++j) fill_row(r + j, f.quotient_images[j]);
  return a;
}

// Rows spanning the relation lattice of G^ab inside Z^(r+s): one row per
// (quotient generator, kernel generator) pair, the abelianized relator
// b a b^-1 a^-1.
std::vector<std::vector<long long>> action_relator_rows(const PfGroup& g) {
  const int r = g.kernel_rank(), n = r + g.quotient_rank();
  std::vector<std::vector<long long>> rows;
  for (int j = 0; j < g.quotient_rank(); ++j)
    for (int i = 0; i < r; ++i) {
      Word conj = g.conjugate_kernel(Word::generator(g.quotient_rank(), j),
                                     Word::generator(r, i));
      std::vector<long long> row(n, 0);
      for (int c = 0; c < r; ++c) row[c] = exponent_sum(conj, c);
      row[i] -= 1;
      if (std::any_of(row.begin(), row.end(), [](long long v) { return v != 0; }))
        rows.push_back(std::move(row));
    }
  return rows;
}

LatticeQuotient build_pf_lattice(const PfGroup& g, const PfMorphism& f) {
  const int n = g.kernel_rank() + g.quotient_rank();
  IntMatrix one_minus = IntMatrix::identity(n) - pf_exponent_matrix(g, f);
  auto relators = action_relator_rows(g);
  IntMatrix rows(n + static_cast<int>(relators.size()), n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rows.at(i, j) = one_minus.at(i, j);
  for (size_t k = 0; k < relators.size(); ++k)
    for (int j = 0; j < n; ++j) rows.at(n + static_cast<int>(k), j) = relators[k][j];
  return LatticeQuotient(n, rows);
}

}  // namespace

AbelianClassContext::AbelianClassContext(const PfGroup& g, const PfMorphism& f)
    : group_(&g), quotient_(build_pf_lattice(g, f)) {}

std::vector<long long> AbelianClassContext::exponent_vector(const PfElement& e) const {
  const int r = group_->kernel_rank(), s = group_->quotient_rank();
  std::vector<long long> v(r + s, 0);
  for (int i = 0; i < r; ++i) v[i] = exponent_sum(e.kernel, i);
  for (int j = 0; j < s; ++j) v[r + j] = exponent_sum(e.quotient, j);
  return v;
}

std::vector<long long> AbelianClassContext::invariant(const PfElement& e) const {
  return quotient_.reduce(exponent_vector(e));
}

std::string AbelianClassContext::invariant_key(const PfElement& e) const {
  return vec_key(invariant(e));
}

std::vector<long long> abelian_class_invariant(const PfGroup& g, const PfMorphism& f,
                                               const PfElement& e) {
  return AbelianClassContext(g, f).invariant(e);
}

namespace {

struct PfOrbitModel {
  const PfGroup& g;
  const PfMorphism& f;
  AbelianClassContext ctx;

  PfOrbitModel(const PfGroup& group, const PfMorphism& morphism)
      : g(group), f(morphism), ctx(group, morphism) {}

  std::vector<PfElement> ball(int radius) const { return ball_enumerate(g, radius); }
  PfElement twisted(const PfElement& s, const PfElement& e) const {
    return g.multiply(g.multiply(s, e), g.invert(pf_apply(g, f, s)));
  }
  std::string key(const PfElement& e) const { return e.key(); }
  std::string invariant_key(const PfElement& e) const { return ctx.invariant_key(e); }
};

struct FreeOrbitModel {
  int rank;
  const FreeMorphism& f;
  LatticeQuotient quotient;

  FreeOrbitModel(int r, const FreeMorphism& morphism)
      : rank(r), f(morphism),
        quotient(r, IntMatrix::identity(r) - abelianized_matrix(morphism)) {}

  std::vector<Word> ball(int radius) const { return word_ball(rank, radius); }
  Word twisted(const Word& s, const Word& e) const {
    return s * e * inverse(f.apply(s));
  }
  std::string key(const Word& w) const { return w.key(); }
  std::string invariant_key(const Word& w) const {
    std::vector<long long> v(rank, 0);
    for (int i = 0; i < rank; ++i) v[i] = exponent_sum(w, i);
    return vec_key(quotient.reduce(v));
  }
};

}  // namespace

OrbitReport twisted_orbit_report(const PfGroup& g, const PfMorphism& f, int ball_radius,
                                 int conjugator_radius, int workers) {
  if (!verify_endomorphism(g, f))
    throw std::invalid_argument("orbit oracle requires a verified endomorphism");
  return orbit_report_impl(PfOrbitModel(g, f), ball_radius, conjugator_radius, workers);
}

OrbitReport twisted_orbit_report_free(int rank, const FreeMorphism& f, int ball_radius,
                                      int conjugator_radius, int workers) {
  if (f.domain_rank() != rank || f.codomain_rank() != rank)
    throw std::invalid_argument("morphism rank mismatch");
  return orbit_report_impl(FreeOrbitModel(rank, f), ball_radius, conjugator_radius, workers);
}

long long finite_quotient_count(const std::vector<long long>& moduli, const IntMatrix& m) {
  const int n = m.rows();
  if (!m.is_square() || static_cast<int>(moduli.size()) != n)
    throw std::invalid_argument("need one modulus per coordinate of a square matrix");
  long long total = 1;
  for (long long mod : moduli) {
    if (mod < 1) throw std::invalid_argument("moduli must be >= 1");
    total = checked_mul(total, mod);
    if (total > 4000000) throw ResourceCapError("finite quotient too large to enumerate");
  }
  IntMatrix one_minus = IntMatrix::identity(n) - m;

  UnionFind uf(static_cast<size_t>(total));
  std::vector<long long> coords(n);
  for (long long idx = 0; idx < total; ++idx) {
    long long rest = idx;
    for (int i = 0; i < n; ++i) {
      coords[i] = rest % moduli[i];
      rest /= moduli[i];
    }
    for (int row = 0; row < n; ++row) {
      long long nidx = 0, mul = 1;
      for (int i = 0; i < n; ++i) {
        long long c = (coords[i] + one_minus.at(row, i)) % moduli[i];
        if (c < 0) c += moduli[i];
        nidx += c * mul;
        mul *= moduli[i];
      }
      uf.unite(static_cast<size_t>(idx), static_cast<size_t>(nidx));
    }
  }
  return static_cast<long long>(uf.count_roots());
}

// --- certificates ----------------------------------------------------------

std::string Certificate::conclusion_name() const {
  switch (conclusion) {
    case Conclusion::RInfinite: return "R_INFINITE";
    case Conclusion::RFinite: return "R_FINITE(" + std::to_string(finite_value) + ")";
    case Conclusion::Undecided: return "UNDECIDED";
  }
  return "?";
}

namespace {

void serialize_node(const CertNode& node, int depth, std::string& out) {
  std::string pad(static_cast<size_t>(depth) * 2, ' ');
  out += pad + (node.citation.empty() ? "rule: " : "axiom: ") + node.kind + "\n";
  if (!node.title.empty()) out += pad + "  title: " + node.title + "\n";
  for (const auto& [k, v] : node.facts) out += pad + "  " + k + ": " + v + "\n";
  if (!node.citation.empty()) out += pad + "  citation: " + node.citation + "\n";
  for (const CertNode& child : node.children) serialize_node(child, depth + 1, out);
}

}  // namespace

std::string Certificate::serialize() const {
  std::string out = "conclusion: " + conclusion_name() + "\n";
  out += "attempts:\n";
  for (const std::string& a : attempts) out += "  - " + a + "\n";
  if (root) serialize_node(*root, 0, out);
  return out;
}

namespace {

const char* kFreeQuotientCitation =
    "Levitt-Lustig: every automorphism of a finitely generated free group of rank at "
    "least 2 has infinite Reidemeister number";
const char* kGbsCitation =
    "Levitt: mapping tori of finite-order automorphisms of F2 are non-elementary "
    "generalized Baumslag-Solitar groups, and such groups have the R-infinity property";

CertNode direct_node(std::string title,
                     std::vector<std::pair<std::string, std::string>> facts) {
  return {"DirectComputation", std::move(title), std::move(facts), "", {}};
}

CertNode axiom_node(std::string kind, std::string title, std::string citation) {
  return {std::move(kind), std::move(title), {}, std::move(citation), {}};
}

// induced morphism on the quotient free group, when the kernel is preserved
FreeMorphism induced_quotient_morphism(const PfGroup& g, const PfMorphism& f) {
  std::vector<Word> images;
  for (const PfElement& e : f.quotient_images) images.push_back(e.quotient);
  return FreeMorphism(g.quotient_rank(), g.quotient_rank(), std::move(images));
}

}  // namespace

Certificate certify_r_infinite(const PfGroup& g, const PfMorphism& f,
                               const GroupNaming* naming_override) {
  if (!verify_automorphism(g, f))
    throw std::invalid_argument("certification requires a verified automorphism");
  Certificate cert;
  const GroupNaming naming = naming_override ? *naming_override : default_naming(g);
  const int r = g.kernel_rank(), s = g.quotient_rank();

  // (1a) quotient witness through the polyfree series quotient
  if (!preserves_series(g, f)) {
    cert.attempts.push_back(
        "QuotientWitness(series quotient): inapplicable: a kernel generator leaves the kernel");
  } else {
    FreeMorphism induced = induced_quotient_morphism(g, f);
    if (s == 1) {
      ReidemeisterCount rc = abelian_reidemeister(abelianized_matrix(induced));
      if (rc.infinite) {
        cert.attempts.push_back("QuotientWitness(series quotient): infinite count on Z");
        CertNode rule{"QuotientWitness",
                      "the induced map on the series quotient Z has infinite count",
                      {{"quotient", "Z"},
                       {"induced_matrix", format_matrix(abelianized_matrix(induced))},
                       {"count", "INFINITE"}},
                      "",
                      {}};
        rule.children.push_back(direct_node(
            "determinant test",
            {{"det(I - induced_matrix)", "0"},
             {"consequence", "coker(I - induced) is infinite, so the quotient count is "
                             "infinite and the full count is infinite"}}));
        cert.conclusion = Certificate::Conclusion::RInfinite;
        cert.root = rule;
        return cert;
      }
      cert.attempts.push_back("QuotientWitness(series quotient): quotient count finite (" +
                              rc.to_string() + ")");
    } else {
      bool induced_auto = false;
      if (f.has_inverse() && preserves_series(g, f.inverse_morphism())) {
        FreeMorphism inv = induced_quotient_morphism(g, f.inverse_morphism());
        induced_auto = compose(induced, inv) == FreeMorphism::identity(s) &&
                       compose(inv, induced) == FreeMorphism::identity(s);
      }
      if (induced_auto) {
        cert.attempts.push_back(
            "QuotientWitness(series quotient): free quotient of rank >= 2");
        CertNode rule{"QuotientWitness",
                      "the induced automorphism on the free series quotient has infinite count",
                      {{"quotient", "free of rank " + std::to_string(s)},
                       {"induced_verified", "two-sided inverse on the quotient checked"}},
                      "",
                      {}};
        rule.children.push_back(axiom_node(
            "FreeQuotientAxiom", "infinite count on the free quotient", kFreeQuotientCitation));
        cert.conclusion = Certificate::Conclusion::RInfinite;
        cert.root = rule;
        return cert;
      }
      cert.attempts.push_back(
          "QuotientWitness(series quotient): induced quotient map not verified as an automorphism");
    }
  }

  // (1b) quotient witness through the free-abelian rank-2 quotient of the
  // canonical torus
  std::optional<MappingTorus> torus = MappingTorus::recognize(g);
  std::optional<IntMatrix> torus_matrix;
  if (!torus) {
    cert.attempts.push_back(
        "QuotientWitness(free-abelian quotient): inapplicable: not the canonical torus "
        "presentation");
  } else {
    PfElement fy = pf_apply(g, f, g.kernel_generator(1));
    if (exponent_sum(fy.kernel, 0) != 0 || exponent_sum(fy.quotient, 0) != 0) {
      cert.attempts.push_back(
          "QuotientWitness(free-abelian quotient): inapplicable: the normal closure of y is "
          "not stabilized");
    } else {
      torus_matrix = induced_quotient_matrix(*torus, f);
      ReidemeisterCount rc = abelian_reidemeister(*torus_matrix);
      if (rc.infinite) {
        cert.attempts.push_back("QuotientWitness(free-abelian quotient): infinite count on Z^2");
        CertNode rule{"QuotientWitness",
                      "the induced map on the (x,t)-exponent quotient Z^2 has infinite count",
                      {{"quotient", "Z^2 via (x,t) exponent sums"},
                       {"induced_matrix", format_matrix(*torus_matrix)},
                       {"count", "INFINITE"}},
                      "",
                      {}};
        rule.children.push_back(direct_node(
            "determinant test", {{"det(I - induced_matrix)", "0"},
                                 {"consequence", "infinitely many quotient classes pull back "
                                                 "to infinitely many classes"}}));
        cert.conclusion = Certificate::Conclusion::RInfinite;
        cert.root = rule;
        return cert;
      }
      cert.attempts.push_back("QuotientWitness(free-abelian quotient): quotient count finite (" +
                              rc.to_string() + ")");
    }
  }

  // (2) finite abelianization of the t-action
  if (s != 1 || r < 2) {
    cert.attempts.push_back(
        "AbelianizationWitness: inapplicable: needs kernel rank >= 2 over quotient Z");
  } else {
    IntMatrix phi_t_ab = abelianized_matrix(g.action(0).twist);
    ReidemeisterCount rc = abelian_reidemeister(phi_t_ab);
    if (!rc.infinite) {
      cert.attempts.push_back("AbelianizationWitness: coker order " + rc.to_string());
      AbelianGroupStructure coker =
          cokernel_structure(IntMatrix::identity(r) - phi_t_ab);
      long long derived_rank = 1 + rc.value * (r - 1);
      CertNode rule{"AbelianizationWitness",
                    "the t-action abelianization has finite cokernel",
                    {{"phi_t_ab", format_matrix(phi_t_ab)},
                     {"coker(I - phi_t_ab)", coker.to_string()},
                     {"coker_order", std::to_string(rc.value)},
                     {"derived_subgroup", "free of rank " + std::to_string(derived_rank) +
                                              " (finite index " + std::to_string(rc.value) +
                                              " in the kernel)"}},
                    "",
                    {}};
      rule.children.push_back(direct_node(
          "cokernel computation",
          {{"det(I - phi_t_ab)", std::to_string(rc.value)},
           {"method", "Smith normal form of I - phi_t_ab"}}));
      rule.children.push_back(axiom_node("FreeQuotientAxiom",
                                         "infinite count on the derived subgroup",
                                         kFreeQuotientCitation));
      cert.conclusion = Certificate::Conclusion::RInfinite;
      cert.root = rule;
      return cert;
    }
    cert.attempts.push_back(
        "AbelianizationWitness: inapplicable: coker of the t-action abelianization is infinite");
  }

  // (3) center construction when the t-action is inner
  if (s != 1 || r != 2) {
    cert.attempts.push_back(
        "CenterWitness: inapplicable: witness search needs kernel rank 2 over quotient Z");
  } else {
    std::optional<Word> w0 = find_inner_witness(g.action(0).twist);
    if (!w0) {
      cert.attempts.push_back("CenterWitness: inapplicable: t-action has no inner witness");
    } else {
      Word w = inverse(*w0);
      CenterReport center = center_conjugation_case(g, w);
      PfElement fz = pf_apply(g, f, center.center);
      if (fz != center.center && fz != g.invert(center.center)) {
        cert.attempts.push_back(
            "CenterWitness: inapplicable: center generator not mapped to itself or its inverse");
      } else {
        cert.attempts.push_back("CenterWitness: center (w, t^-1) verified");
        CertNode rule{"CenterWitness",
                      "quotient by the central element (w, t^-1) is free of rank 2",
                      {{"witness_w", format_word(naming.kernel, w)},
                       {"center", format_element(naming, center.center)},
                       {"center_image", fz == center.center ? "fixed" : "inverted"}},
                      "",
                      {}};
        std::vector<std::pair<std::string, std::string>> facts;
        for (size_t i = 0; i < center.checks.size(); ++i)
          facts.push_back({"check_" + std::to_string(i), center.checks[i]});
        rule.children.push_back(direct_node("centrality verification", std::move(facts)));
        rule.children.push_back(axiom_node("FreeQuotientAxiom",
                                           "infinite count on the central quotient",
                                           kFreeQuotientCitation));
        cert.conclusion = Certificate::Conclusion::RInfinite;
        cert.root = rule;
        return cert;
      }
    }
  }

  // (4) trivial fixed quotient + infinite kernel classes
  if (!torus || !torus_matrix) {
    cert.attempts.push_back(
        "KernelWitnessFixTrivial: inapplicable: needs the canonical torus with stabilized "
        "kernel");
  } else if (!fixed_sublattice_trivial(*torus_matrix)) {
    cert.attempts.push_back(
        "KernelWitnessFixTrivial: inapplicable: quotient map has a nontrivial fixed sublattice");
  } else {
    SupportedVector y_class = eta_ab_image(*torus, f, 0);
    bool single_positive =
        y_class.terms().size() == 1 && y_class.terms().begin()->second == 1;
    long long shift = exponent_sum(pf_apply(g, f, g.kernel_generator(0)).kernel, 0);
    bool window_ok = single_positive && (shift == 1 || shift == -1);
    long long c = single_positive ? y_class.terms().begin()->first : 0;
    for (long long j = -3; j <= 3 && window_ok; ++j)
      window_ok = eta_ab_image(*torus, f, j) == SupportedVector::basis(c + shift * j);
    if (!window_ok) {
      cert.attempts.push_back(
          "KernelWitnessFixTrivial: inapplicable: kernel action is not a signed basis shift");
    } else {
      cert.attempts.push_back("KernelWitnessFixTrivial: kernel classes infinite, fix trivial");
      long long det = determinant(IntMatrix::identity(2) - *torus_matrix);
      CertNode rule{"KernelWitnessFixTrivial",
                    "trivial fixed sublattice of the quotient and infinitely many kernel classes",
                    {{"quotient_matrix", format_matrix(*torus_matrix)},
                     {"det(I - quotient_matrix)", std::to_string(det)}},
                    "",
                    {}};
      rule.children.push_back(direct_node(
          "fixed sublattice", {{"det(I - quotient_matrix)", std::to_string(det)},
                               {"consequence", "only 0 is fixed on the quotient Z^2"}}));
      rule.children.push_back(direct_node(
          "kernel classes",
          {{"eta_ab(e_j)", "e(" + std::to_string(c) + (shift == 1 ? " + j" : " - j") + ")"},
           {"checked", "j in [-3, 3], single basis class, coefficient +1"},
           {"argument",
            "the coefficient-sum homomorphism H^ab -> Z is eta_ab-invariant, hence factors "
            "through coker(1 - eta_ab) onto Z; the kernel automorphism has infinitely many "
            "classes, and with a trivial fixed quotient these classes stay distinct"}}));
      cert.conclusion = Certificate::Conclusion::RInfinite;
      cert.root = rule;
      return cert;
    }
  }

  // (5) reflection-case torus: conclusion by the cited external theorem
  if (s == 1 && r == 2) {
    IntMatrix phi_t_ab = abelianized_matrix(g.action(0).twist);
    long long det = determinant(phi_t_ab);
    if ((det == 1 || det == -1) &&
        classify_gl2_torus(phi_t_ab) == TorusMatrixClass::DetMinusOneEigenvalueOne) {
      cert.attempts.push_back("ExternalAxiom: reflection-case torus");
      bool order_two = phi_t_ab * phi_t_ab == IntMatrix::identity(2);
      FreeMorphism twist_sq = compose(g.action(0).twist, g.action(0).twist);
      std::optional<Word> inner = find_inner_witness(twist_sq);
      CertNode rule = axiom_node(
          "ExternalAxiom", "the whole group has the R-infinity property", kGbsCitation);
      rule.facts = {{"phi_t_ab", format_matrix(phi_t_ab)},
                    {"classification", torus_class_name(TorusMatrixClass::DetMinusOneEigenvalueOne)}};
      rule.children.push_back(direct_node(
          "finite order of the abelianized action",
          {{"(phi_t_ab)^2", order_two ? "identity" : "NOT identity (unexpected)"},
           {"inner_witness_for_squared_action",
            inner ? format_word(naming.kernel, *inner) : "not found within bound"}}));
      cert.conclusion = Certificate::Conclusion::RInfinite;
      cert.root = rule;
      return cert;
    }
  }
  cert.attempts.push_back("ExternalAxiom: inapplicable: not a reflection-case torus");

  if (r == 1 && s == 1 && g.is_direct()) {
    ReidemeisterCount rc = abelian_reidemeister(pf_exponent_matrix(g, f));
    if (!rc.infinite)
      cert.attempts.push_back("note: free abelian group with exact count " + rc.to_string() +
                              "; no infinitude certificate exists");
  }
  cert.conclusion = Certificate::Conclusion::Undecided;
  return cert;
}

}  // namespace polyfree
