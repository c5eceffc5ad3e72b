#include "polyfree/mapping_torus.hpp"

namespace polyfree {

namespace {

constexpr int kX = 0;
constexpr int kY = 1;
constexpr int kT = 0;

Word xy_word(std::vector<Letter> raw) { return Word(2, std::move(raw)); }

}  // namespace

MappingTorus MappingTorus::make(long long k) {
  if (k == 0)
    throw std::invalid_argument("k = 0 is the direct product F2 x Z; build it directly");
  // presentation map t^-1 x t = x y^k, t^-1 y t = y, with its inverse
  FreeMorphism twist(2, 2, {Word::generator(2, kX) * Word::power(2, kY, k),
                            Word::generator(2, kY)});
  FreeMorphism twist_inv(2, 2, {Word::generator(2, kX) * Word::power(2, kY, -k),
                                Word::generator(2, kY)});
  PfGroup g = PfGroup::semidirect(2, 1, {{twist, twist_inv}});
  return MappingTorus(k, std::move(g));
}

std::optional<MappingTorus> MappingTorus::recognize(const PfGroup& g) {
  if (g.kernel_rank() != 2 || g.quotient_rank() != 1) return std::nullopt;
  const FreeMorphism& twist = g.action(0).twist;
  if (twist.image(kY) != Word::generator(2, kY)) return std::nullopt;
  const auto& ls = twist.image(kX).letters();
  if (ls.size() < 2 || ls[0] != Letter{kX, +1}) return std::nullopt;
  long long k = 0;
  for (size_t i = 1; i < ls.size(); ++i) {
    if (ls[i].gen != kY) return std::nullopt;
    k += ls[i].sign;
  }
  if (k == 0 || static_cast<size_t>(k < 0 ? -k : k) != ls.size() - 1) return std::nullopt;
  return MappingTorus(k, g);
}

TorusMatrixClass classify_gl2_torus(const IntMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw std::invalid_argument("matrix must be 2x2");
  long long det = determinant(m);
  if (det != 1 && det != -1)
    throw std::invalid_argument("matrix must lie in GL2(Z), got det " + std::to_string(det));
  const IntMatrix id = IntMatrix::identity(2);
  if (m == id) return TorusMatrixClass::Identity;
  IntMatrix minus_id(2, 2, {-1, 0, 0, -1});
  if (m == minus_id) return TorusMatrixClass::MinusIdentity;
  if (determinant(m - id) != 0) return TorusMatrixClass::NoEigenvalueOne;
  if (det == -1) return TorusMatrixClass::DetMinusOneEigenvalueOne;
  return TorusMatrixClass::UnipotentNonidentity;
}

std::string torus_class_name(TorusMatrixClass c) {
  switch (c) {
    case TorusMatrixClass::Identity: return "i (identity)";
    case TorusMatrixClass::MinusIdentity: return "ii (minus identity)";
    case TorusMatrixClass::NoEigenvalueOne: return "iii (no eigenvalue one)";
    case TorusMatrixClass::DetMinusOneEigenvalueOne:
      return "iv (det -1 with eigenvalue one)";
    case TorusMatrixClass::UnipotentNonidentity: return "v (unipotent, not identity)";
  }
  return "?";
}

namespace {

PfMorphism morphism_from_images(const PfGroup& g, PfElement fx, PfElement fy, PfElement ft,
                                PfElement ix, PfElement iy, PfElement it) {
  PfMorphism f;
  f.kernel_images = {std::move(fx), std::move(fy)};
  f.quotient_images = {std::move(ft)};
  f.inverse_kernel_images = std::vector<PfElement>{std::move(ix), std::move(iy)};
  f.inverse_quotient_images = std::vector<PfElement>{std::move(it)};
  if (!verify_automorphism(g, f))
    throw std::logic_error("torus generator automorphism failed verification");
  return f;
}

PfElement kernel_elem(const PfGroup& g, Word w) { return g.element(std::move(w), Word(1)); }

}  // namespace

PfMorphism torus_psi(const MappingTorus& t) {
  const PfGroup& g = t.group();
  PfElement x = g.kernel_generator(kX), y = g.kernel_generator(kY);
  PfElement tt = g.quotient_generator(kT);
  return morphism_from_images(g, g.multiply(tt, x), y, tt,
                              g.multiply(g.invert(tt), x), y, tt);
}

PfMorphism torus_omega(const MappingTorus& t) {
  const PfGroup& g = t.group();
  PfElement x = g.kernel_generator(kX), y_inv = g.kernel_generator(kY, -1);
  PfElement t_inv = g.quotient_generator(kT, -1);
  return morphism_from_images(g, x, y_inv, t_inv, x, y_inv, t_inv);
}

PfMorphism torus_delta(const MappingTorus& t) {
  const PfGroup& g = t.group();
  PfElement x_inv = g.kernel_generator(kX, -1), y_inv = g.kernel_generator(kY, -1);
  PfElement ft = g.multiply(g.quotient_generator(kT),
                            kernel_elem(g, Word::power(2, kY, -t.k())));
  return morphism_from_images(g, x_inv, y_inv, ft, x_inv, y_inv, ft);
}

PfMorphism torus_xi(const MappingTorus& t) {
  const PfGroup& g = t.group();
  PfElement y = g.kernel_generator(kY), tt = g.quotient_generator(kT);
  return morphism_from_images(
      g, kernel_elem(g, xy_word({{kX, +1}, {kY, +1}})), y, tt,
      kernel_elem(g, xy_word({{kX, +1}, {kY, -1}})), y, tt);
}

PfMorphism torus_inner(const MappingTorus& t, const PfElement& c) {
  const PfGroup& g = t.group();
  auto conj = [&](const PfElement& e) { return g.conjugate(c, e); };
  PfElement ci = g.invert(c);
  auto conj_inv = [&](const PfElement& e) { return g.conjugate(ci, e); };
  PfElement x = g.kernel_generator(kX), y = g.kernel_generator(kY);
  PfElement tt = g.quotient_generator(kT);
  return morphism_from_images(g, conj(x), conj(y), conj(tt), conj_inv(x), conj_inv(y),
                              conj_inv(tt));
}

FamilyForm parse_family_form(const std::string& s) {
  if (s == "a") return FamilyForm::A;
  if (s == "b") return FamilyForm::B;
  if (s == "c") return FamilyForm::C;
  if (s == "d") return FamilyForm::D;
  throw std::invalid_argument("family form must be one of a, b, c, d");
}

std::string family_form_name(FamilyForm f) {
  switch (f) {
    case FamilyForm::A: return "a";
    case FamilyForm::B: return "b";
    case FamilyForm::C: return "c";
    case FamilyForm::D: return "d";
  }
  return "?";
}

FamilyAutomorphism family_automorphism(const MappingTorus& t, FamilyForm form, long long m,
                                       long long i, std::optional<PfElement> conjugator) {
  const long long bound = t.k() < 0 ? -t.k() : t.k();
  if (i < 0 || i >= bound)
    throw std::invalid_argument("twist count i must satisfy 0 <= i <= |k|-1");
  const PfGroup& g = t.group();

  const bool use_omega = form == FamilyForm::B || form == FamilyForm::D;
  const bool use_delta = form == FamilyForm::C || form == FamilyForm::D;

  // rightmost factor first: Xi^i, then Delta, Omega, gamma^-1, Psi^-m
  PfMorphism morph = PfMorphism::identity(g);
  PfMorphism xi = torus_xi(t);
  for (long long step = 0; step < i; ++step) morph = pf_compose(g, xi, morph);
  if (use_delta) morph = pf_compose(g, torus_delta(t), morph);
  if (use_omega) morph = pf_compose(g, torus_omega(t), morph);
  if (conjugator && !conjugator->is_identity())
    morph = pf_compose(g, torus_inner(t, g.invert(*conjugator)), morph);
  PfMorphism psi = torus_psi(t);
  PfMorphism psi_step = m >= 0 ? psi.inverse_morphism() : psi;
  for (long long step = 0; step < (m < 0 ? -m : m); ++step)
    morph = pf_compose(g, psi_step, morph);

  if (!conjugator || conjugator->is_identity()) {
    // the closed-form images are convention-free ground truth
    const long long k = t.k();
    auto expect_x = [&](int sign, long long texp, long long yexp) {
      Word kernel = sign > 0 ? Word::generator(2, kX) * Word::power(2, kY, yexp)
                             : Word::generator(2, kX, -1) * Word::power(2, kY, yexp);
      return g.element(kernel, Word::power(1, kT, texp));
    };
    PfElement ex = g.identity(), ey = g.identity(), et = g.identity();
    switch (form) {
      case FamilyForm::A:
        ex = expect_x(+1, -m, k * m + i);
        ey = g.kernel_generator(kY);
        et = g.quotient_generator(kT);
        break;
      case FamilyForm::B:
        ex = expect_x(+1, -m, k * m - i);
        ey = g.kernel_generator(kY, -1);
        et = g.quotient_generator(kT, -1);
        break;
      case FamilyForm::C:
        ex = expect_x(-1, m, -i);
        ey = g.kernel_generator(kY, -1);
        et = g.element(Word::power(2, kY, -k), Word::generator(1, kT));
        break;
      case FamilyForm::D:
        ex = expect_x(-1, m, i);
        ey = g.kernel_generator(kY);
        et = g.element(Word::power(2, kY, k), Word::generator(1, kT, -1));
        break;
    }
    if (morph.kernel_images[kX] != ex || morph.kernel_images[kY] != ey ||
        morph.quotient_images[kT] != et)
      throw std::logic_error("composed family automorphism disagrees with its closed form");
  }

  if (!verify_automorphism(g, morph))
    throw std::logic_error("family automorphism failed relator verification");
  return {form, m, i, std::move(conjugator), std::move(morph)};
}

namespace {

long long x_exponent(const PfElement& e) { return exponent_sum(e.kernel, kX); }
long long t_exponent(const PfElement& e) { return exponent_sum(e.quotient, kT); }

}  // namespace

IntMatrix induced_quotient_matrix(const MappingTorus& t, const PfMorphism& f) {
  const PfGroup& g = t.group();
  PfElement fy = pf_apply(g, f, g.kernel_generator(kY));
  if (x_exponent(fy) != 0 || t_exponent(fy) != 0)
    throw std::invalid_argument("morphism does not stabilize the normal closure of y");
  PfElement fx = pf_apply(g, f, g.kernel_generator(kX));
  PfElement ft = pf_apply(g, f, g.quotient_generator(kT));
  return IntMatrix(2, 2, {x_exponent(fx), t_exponent(fx), x_exponent(ft), t_exponent(ft)});
}

bool kernel_membership(const MappingTorus& t, const PfElement& e) {
  (void)t;
  return t_exponent(e) == 0 && x_exponent(e) == 0;
}

SupportedVector rs_rewrite(const MappingTorus& t, const PfElement& e) {
  if (!kernel_membership(t, e))
    throw std::invalid_argument("element is not in the normal closure of y");
  SupportedVector out;
  long long prefix = 0;
  for (Letter l : e.kernel.letters()) {
    if (l.gen == kX)
      prefix += l.sign;
    else
      out.add(prefix, l.sign);
  }
  return out;
}

SupportedVector eta_ab_image(const MappingTorus& t, const PfMorphism& f, long long index) {
  const PfGroup& g = t.group();
  Word w = Word::power(2, kX, index) * Word::generator(2, kY) * Word::power(2, kX, -index);
  PfElement image = pf_apply(g, f, g.element(w, Word(1)));
  if (!kernel_membership(t, image))
    throw std::logic_error("image left the normal closure of y; exponent sums not preserved");
  return rs_rewrite(t, image);
}

}  // namespace polyfree
