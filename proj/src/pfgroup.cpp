#include "polyfree/pfgroup.hpp"

#include <algorithm>
#include <unordered_set>

namespace polyfree {

bool PfElement::operator<(const PfElement& o) const {
  if (length() != o.length()) return length() < o.length();
  if (kernel != o.kernel) return kernel < o.kernel;
  return quotient < o.quotient;
}

PfGroup::PfGroup(int r, int s, std::vector<QuotientAction> actions)
    : kernel_rank_(r), quotient_rank_(s), actions_(std::move(actions)) {}

PfGroup PfGroup::direct_product(int kernel_rank, int quotient_rank) {
  std::vector<std::pair<FreeMorphism, std::optional<FreeMorphism>>> twists;
  for (int j = 0; j < quotient_rank; ++j)
    twists.emplace_back(FreeMorphism::identity(kernel_rank), std::nullopt);
  return semidirect(kernel_rank, quotient_rank, std::move(twists));
}

PfGroup PfGroup::semidirect(
    int kernel_rank, int quotient_rank,
    std::vector<std::pair<FreeMorphism, std::optional<FreeMorphism>>> twists) {
  if (kernel_rank < 1 || quotient_rank < 1)
    throw std::invalid_argument("ranks must be positive");
  if (twists.size() != static_cast<size_t>(quotient_rank))
    throw std::invalid_argument("one action per quotient generator required");

  std::vector<QuotientAction> actions;
  for (auto& [twist, inv] : twists) {
    if (twist.domain_rank() != kernel_rank || twist.codomain_rank() != kernel_rank)
      throw std::invalid_argument("action must be an endomorphism of the kernel");
    FreeMorphism twist_inv = FreeMorphism::identity(kernel_rank);
    if (inv.has_value()) {
      twist_inv = *inv;
    } else if (kernel_rank == 1) {
      const Word& im = twist.image(0);
      if (im.length() != 1)
        throw std::invalid_argument("action image fails automorphism verification");
      twist_inv = twist;  // a -> a^(+-1) is its own inverse
    } else if (kernel_rank == 2) {
      Rank2Recognition rec = recognize_rank2_automorphism(twist);
      if (!rec.is_automorphism)
        throw std::invalid_argument("action image fails automorphism verification");
      twist_inv = *rec.inverse;
    } else {
      throw std::invalid_argument(
          "kernel rank >= 3 requires an explicit inverse for every action");
    }
    if (compose(twist, twist_inv) != FreeMorphism::identity(kernel_rank) ||
        compose(twist_inv, twist) != FreeMorphism::identity(kernel_rank))
      throw std::invalid_argument("action inverse fails two-sided verification");
    actions.push_back({twist, twist_inv});
  }
  return PfGroup(kernel_rank, quotient_rank, std::move(actions));
}

bool PfGroup::is_direct() const {
  for (const auto& a : actions_)
    if (a.twist != FreeMorphism::identity(kernel_rank_)) return false;
  return true;
}

PfElement PfGroup::identity() const {
  return {Word(kernel_rank_), Word(quotient_rank_)};
}

PfElement PfGroup::element(Word kernel, Word quotient) const {
  if (kernel.rank() != kernel_rank_ || quotient.rank() != quotient_rank_)
    throw std::invalid_argument("element word ranks do not match the group");
  return {std::move(kernel), std::move(quotient)};
}

PfElement PfGroup::kernel_generator(int i, int sign) const {
  return {Word::generator(kernel_rank_, i, sign), Word(quotient_rank_)};
}

PfElement PfGroup::quotient_generator(int j, int sign) const {
  return {Word(kernel_rank_), Word::generator(quotient_rank_, j, sign)};
}

Word PfGroup::conjugate_kernel(const Word& qword, const Word& kword) const {
  if (qword.rank() != quotient_rank_ || kword.rank() != kernel_rank_)
    throw std::invalid_argument("word ranks do not match the group");
  // b a b^-1, one quotient letter at a time, innermost first
  Word out = kword;
  for (auto it = qword.letters().rbegin(); it != qword.letters().rend(); ++it) {
    const QuotientAction& act = actions_[it->gen];
    out = (it->sign > 0 ? act.twist_inv : act.twist).apply(out);
  }
  return out;
}

PfElement PfGroup::multiply(const PfElement& g, const PfElement& h) const {
  return {g.kernel * conjugate_kernel(g.quotient, h.kernel), g.quotient * h.quotient};
}

PfElement PfGroup::invert(const PfElement& g) const {
  Word qinv = inverse(g.quotient);
  return {conjugate_kernel(qinv, inverse(g.kernel)), qinv};
}

PfElement PfGroup::conjugate(const PfElement& g, const PfElement& h) const {
  return multiply(multiply(g, h), invert(g));
}

PfElement PfGroup::power(const PfElement& g, long long n) const {
  PfElement base = n < 0 ? invert(g) : g;
  long long reps = n < 0 ? -n : n;
  PfElement out = identity();
  for (long long i = 0; i < reps; ++i) out = multiply(out, base);
  return out;
}

PfMorphism PfMorphism::identity(const PfGroup& g) {
  PfMorphism f;
  for (int i = 0; i < g.kernel_rank(); ++i) f.kernel_images.push_back(g.kernel_generator(i));
  for (int j = 0; j < g.quotient_rank(); ++j)
    f.quotient_images.push_back(g.quotient_generator(j));
  f.inverse_kernel_images = f.kernel_images;
  f.inverse_quotient_images = f.quotient_images;
  return f;
}

PfMorphism PfMorphism::inverse_morphism() const {
  if (!has_inverse()) throw std::logic_error("morphism has no stored inverse");
  PfMorphism f;
  f.kernel_images = *inverse_kernel_images;
  f.quotient_images = *inverse_quotient_images;
  f.inverse_kernel_images = kernel_images;
  f.inverse_quotient_images = quotient_images;
  return f;
}

PfElement pf_apply(const PfGroup& g, const PfMorphism& f, const PfElement& e) {
  if (f.kernel_images.size() != static_cast<size_t>(g.kernel_rank()) ||
      f.quotient_images.size() != static_cast<size_t>(g.quotient_rank()))
    throw std::invalid_argument("morphism does not match the group");
  PfElement out = g.identity();
  for (Letter l : e.kernel.letters()) {
    const PfElement& im = f.kernel_images[l.gen];
    out = g.multiply(out, l.sign > 0 ? im : g.invert(im));
  }
  for (Letter l : e.quotient.letters()) {
    const PfElement& im = f.quotient_images[l.gen];
    out = g.multiply(out, l.sign > 0 ? im : g.invert(im));
  }
  return out;
}

PfMorphism pf_compose(const PfGroup& g, const PfMorphism& f1, const PfMorphism& f2) {
  PfMorphism out;
  for (const PfElement& e : f2.kernel_images) out.kernel_images.push_back(pf_apply(g, f1, e));
  for (const PfElement& e : f2.quotient_images)
    out.quotient_images.push_back(pf_apply(g, f1, e));
  if (f1.has_inverse() && f2.has_inverse()) {
    PfMorphism i1 = f1.inverse_morphism(), i2 = f2.inverse_morphism();
    out.inverse_kernel_images = std::vector<PfElement>();
    out.inverse_quotient_images = std::vector<PfElement>();
    for (const PfElement& e : i1.kernel_images)
      out.inverse_kernel_images->push_back(pf_apply(g, i2, e));
    for (const PfElement& e : i1.quotient_images)
      out.inverse_quotient_images->push_back(pf_apply(g, i2, e));
  }
  return out;
}

bool verify_endomorphism(const PfGroup& g, const PfMorphism& f) {
  if (f.kernel_images.size() != static_cast<size_t>(g.kernel_rank()) ||
      f.quotient_images.size() != static_cast<size_t>(g.quotient_rank()))
    return false;
  for (int j = 0; j < g.quotient_rank(); ++j) {
    const PfElement& fb = f.quotient_images[j];
    for (int i = 0; i < g.kernel_rank(); ++i) {
      PfElement lhs = g.conjugate(fb, f.kernel_images[i]);
      Word relator_image =
          g.conjugate_kernel(Word::generator(g.quotient_rank(), j),
                             Word::generator(g.kernel_rank(), i));
      PfElement rhs = pf_apply(g, f, g.element(relator_image, Word(g.quotient_rank())));
      if (lhs != rhs) return false;
    }
  }
  return true;
}

bool verify_automorphism(const PfGroup& g, const PfMorphism& f) {
  if (!f.has_inverse() || !verify_endomorphism(g, f)) return false;
  PfMorphism inv = f.inverse_morphism();
  if (!verify_endomorphism(g, inv)) return false;
  PfMorphism a = pf_compose(g, f, inv), b = pf_compose(g, inv, f);
  PfMorphism id = PfMorphism::identity(g);
  return a.kernel_images == id.kernel_images && a.quotient_images == id.quotient_images &&
         b.kernel_images == id.kernel_images && b.quotient_images == id.quotient_images;
}

bool preserves_series(const PfGroup& g, const PfMorphism& f) {
  (void)g;
  for (const PfElement& e : f.kernel_images)
    if (!e.quotient.is_identity()) return false;
  return true;
}

std::vector<PfElement> ball_enumerate(const PfGroup& g, int radius, size_t max_elements) {
  if (radius < 0) throw std::invalid_argument("radius must be nonnegative");
  if (radius > kBallRadiusCap)
    throw ResourceCapError("ball radius " + std::to_string(radius) + " exceeds cap " +
                           std::to_string(kBallRadiusCap));
  std::vector<PfElement> gens;
  for (int i = 0; i < g.kernel_rank(); ++i)
    for (int sign : {+1, -1}) gens.push_back(g.kernel_generator(i, sign));
  for (int j = 0; j < g.quotient_rank(); ++j)
    for (int sign : {+1, -1}) gens.push_back(g.quotient_generator(j, sign));

  std::vector<PfElement> out{g.identity()};
  std::unordered_set<std::string> seen{out.front().key()};
  size_t layer_begin = 0;
  for (int step = 0; step < radius; ++step) {
    size_t layer_end = out.size();
    std::vector<PfElement> layer;
    for (size_t i = layer_begin; i < layer_end; ++i)
      for (const PfElement& s : gens) {
        PfElement next = g.multiply(out[i], s);
        if (seen.insert(next.key()).second) {
          layer.push_back(next);
          if (seen.size() > max_elements)
            throw ResourceCapError("ball size exceeds cap of " +
                                   std::to_string(max_elements) + " elements");
        }
      }
    std::sort(layer.begin(), layer.end());
    out.insert(out.end(), layer.begin(), layer.end());
    layer_begin = layer_end;
  }
  return out;
}

std::string SubgroupDescriptor::tag_name() const {
  switch (tag) {
    case Tag::WholeGroup: return "WholeGroup";
    case Tag::KernelTimesCentralizer: return "KernelTimesCentralizer";
    case Tag::CentralizerPair: return "CentralizerPair";
    case Tag::ZCrossKernelPrime: return "ZCrossKernelPrime";
    case Tag::CentralizerOnly: return "CentralizerOnly";
    case Tag::ZCrossCentralizer: return "ZCrossCentralizer";
    case Tag::ZCrossCentralizerSquares: return "ZCrossCentralizerSquares";
  }
  return "?";
}

namespace {

bool is_power_of(const Word& u, const Word& root) {
  if (u.is_identity()) return true;
  RootPower rp = primitive_root(u);
  return rp.root == root || rp.root == inverse(root);
}

// exponent j with u == root^j; requires u to be a power of root
long long power_exponent(const Word& u, const Word& root) {
  if (u.is_identity()) return 0;
  long long j = static_cast<long long>(u.length() / root.length());
  if (pow(root, j) == u) return j;
  if (pow(root, -j) == u) return -j;
  throw std::logic_error("power_exponent: not a power of the given root");
}

}  // namespace

bool SubgroupDescriptor::contains(const PfGroup& g, const PfElement& e) const {
  switch (tag) {
    case Tag::WholeGroup:
      return true;
    case Tag::KernelTimesCentralizer:
      // one side cyclic, the other whole
      if (kernel_root) return is_power_of(e.kernel, *kernel_root);
      return is_power_of(e.quotient, *quotient_root);
    case Tag::CentralizerPair:
      return is_power_of(e.kernel, *kernel_root) && is_power_of(e.quotient, *quotient_root);
    case Tag::ZCrossKernelPrime:
      return quotient_sign(g, e.quotient) == 1;
    case Tag::CentralizerOnly:
      return e.kernel.is_identity() && is_power_of(e.quotient, *quotient_root);
    case Tag::ZCrossCentralizer:
      return is_power_of(e.quotient, *quotient_root);
    case Tag::ZCrossCentralizerSquares: {
      if (!is_power_of(e.quotient, *quotient_root)) return false;
      long long j = power_exponent(e.quotient, *quotient_root);
      if (!twisted_offset) return j % 2 == 0;
      // alternating subgroup <(offset, root)>: even powers pair with
      // kernel 0, odd powers with the forced offset
      long long a = exponent_sum(e.kernel, 0);
      return (j % 2 == 0) ? a == 0 : a == *twisted_offset;
    }
  }
  return false;
}

SubgroupDescriptor centralizer_direct_product(const PfGroup& g, const PfElement& e) {
  if (!g.is_direct()) throw std::invalid_argument("group is not a direct product");
  const bool a_trivial = e.kernel.is_identity();
  const bool b_trivial = e.quotient.is_identity();
  SubgroupDescriptor d{SubgroupDescriptor::Tag::WholeGroup, {}, {}, {}, false, ""};
  if (a_trivial && b_trivial) return d;
  if (!a_trivial && b_trivial) {
    d.tag = SubgroupDescriptor::Tag::KernelTimesCentralizer;
    d.kernel_root = primitive_root(e.kernel).root;
    return d;
  }
  if (a_trivial && !b_trivial) {
    d.tag = SubgroupDescriptor::Tag::KernelTimesCentralizer;
    d.quotient_root = primitive_root(e.quotient).root;
    return d;
  }
  d.tag = SubgroupDescriptor::Tag::CentralizerPair;
  d.kernel_root = primitive_root(e.kernel).root;
  d.quotient_root = primitive_root(e.quotient).root;
  return d;
}

int quotient_sign(const PfGroup& g, const Word& qword) {
  if (g.kernel_rank() != 1) throw std::invalid_argument("sign map needs a Z kernel");
  int sign = 1;
  for (Letter l : qword.letters()) {
    const Word& im = g.action(l.gen).twist.image(0);
    if (im.letters()[0].sign < 0) sign = -sign;
  }
  return sign;
}

SubgroupDescriptor centralizer_z_semidirect(const PfGroup& g, const PfElement& e) {
  if (g.kernel_rank() != 1) throw std::invalid_argument("group kernel must be Z");
  bool nontrivial = false;
  for (int j = 0; j < g.quotient_rank(); ++j) {
    const Word& im = g.action(j).twist.image(0);
    if (im.length() != 1) throw std::invalid_argument("action must be a sign action on Z");
    if (im.letters()[0].sign < 0) nontrivial = true;
  }
  if (!nontrivial)
    throw std::invalid_argument("sign action is trivial; use the direct-product case");

  const bool a_trivial = e.kernel.is_identity();
  const bool b_trivial = e.quotient.is_identity();
  SubgroupDescriptor d{SubgroupDescriptor::Tag::WholeGroup, {}, {}, {}, false, ""};
  if (a_trivial && b_trivial) return d;
  if (!a_trivial && b_trivial) {
    d.tag = SubgroupDescriptor::Tag::ZCrossKernelPrime;
    return d;
  }
  const Word root = primitive_root(e.quotient).root;
  const int sign_b = quotient_sign(g, e.quotient);
  if (a_trivial) {
    d.quotient_root = root;
    d.tag = sign_b == 1 ? SubgroupDescriptor::Tag::ZCrossCentralizer
                        : SubgroupDescriptor::Tag::CentralizerOnly;
    return d;
  }
  // both parts nontrivial
  const int sign_root = quotient_sign(g, root);
  d.quotient_root = root;
  if (sign_root == 1) {
    d.tag = SubgroupDescriptor::Tag::ZCrossCentralizer;
    return d;
  }
  d.tag = SubgroupDescriptor::Tag::ZCrossCentralizerSquares;
  d.interpretation_dependent = true;
  if (sign_b == 1) {
    d.note = "even powers of the centralizer root; index-2 reading of the squares subgroup";
    return d;
  }
  // sign_b == -1: commuting elements alternate between (0, root^even) and
  // (a0, root^odd); the cited formula would admit every kernel coordinate
  d.twisted_offset = exponent_sum(e.kernel, 0);
  d.note = "infinite cyclic on (" + std::to_string(*d.twisted_offset) +
           ", root); differs from the published squares formula";
  return d;
}

FreeByCyclicAbelianization abelianization_free_by_cyclic(const PfGroup& g) {
  if (g.quotient_rank() != 1)
    throw std::invalid_argument("abelianization route requires quotient Z");
  IntMatrix phi_ab = abelianized_matrix(g.action(0).twist);
  return {cokernel_structure(IntMatrix::identity(g.kernel_rank()) - phi_ab)};
}

EulerData euler_data(const PolyfreeSeries& series) {
  if (series.ranks.empty()) throw std::invalid_argument("series must have length >= 1");
  EulerData out;
  out.length = static_cast<long long>(series.ranks.size());
  out.characteristic = 1;
  for (long long r : series.ranks) {
    if (r < 1) throw std::invalid_argument("series ranks must be positive");
    out.characteristic = checked_mul(out.characteristic, r - 1);
  }
  if (out.characteristic != 0) {
    const long long k = out.length;
    const long long c = out.characteristic;
    unsigned long long exponent =
        static_cast<unsigned long long>((k - 1) * c + k * k - 1);
    out.bound_applicable = true;
    out.bound = BigUint::pow(BigUint(static_cast<unsigned long long>(c + 1)), exponent);
  }
  return out;
}

GroupNaming default_naming(const PfGroup& g) {
  // the canonical torus keeps the x, y, t names
  bool torus_like = g.kernel_rank() == 2 && g.quotient_rank() == 1 &&
                    g.action(0).twist != FreeMorphism::identity(2);
  if (torus_like)
    return {Alphabet({"x", "y"}), Alphabet({"t"})};
  Alphabet kernel = Alphabet::consecutive(g.kernel_rank(), 'a');
  Alphabet quotient = g.quotient_rank() == 1 ? Alphabet({"t"})
                                             : Alphabet::consecutive(g.quotient_rank(), 'u');
  return {kernel, quotient};
}

std::string format_element(const GroupNaming& naming, const PfElement& e) {
  return "(" + format_word(naming.kernel, e.kernel) + ", " +
         format_word(naming.quotient, e.quotient) + ")";
}

CenterReport center_conjugation_case(const PfGroup& g, const Word& w) {
  if (g.quotient_rank() != 1)
    throw std::invalid_argument("center construction requires quotient Z");
  if (w.rank() != g.kernel_rank()) throw std::invalid_argument("conjugator rank mismatch");

  // phi(t) must be a -> w^-1 a w on every kernel generator
  const FreeMorphism& twist = g.action(0).twist;
  for (int i = 0; i < g.kernel_rank(); ++i) {
    Word expected = inverse(w) * Word::generator(g.kernel_rank(), i) * w;
    if (twist.image(i) != expected)
      throw std::invalid_argument("t-action is not conjugation by the given word");
  }

  CenterReport report{g.element(w, Word::power(1, 0, -1)), {}};
  const PfElement& z = report.center;
  for (int i = 0; i < g.kernel_rank(); ++i) {
    PfElement a = g.kernel_generator(i);
    if (g.multiply(z, a) != g.multiply(a, z))
      throw std::logic_error("center candidate fails to commute with a kernel generator");
    report.checks.push_back("commutes with kernel generator " + std::to_string(i));
  }
  PfElement t = g.quotient_generator(0);
  if (g.multiply(z, t) != g.multiply(t, z))
    throw std::logic_error("center candidate fails to commute with t");
  report.checks.push_back("commutes with t");

  for (long long j = 1; j <= 8; ++j) {
    if (exponent_sum(g.power(z, j).quotient, 0) != -j ||
        exponent_sum(g.power(z, -j).quotient, 0) != j)
      throw std::logic_error("powers of the center candidate lost their t-exponent");
  }
  report.checks.push_back(
      "<w t^-1> meets the kernel trivially: the j-th power has t-exponent -j");
  return report;
}

}  // namespace polyfree
