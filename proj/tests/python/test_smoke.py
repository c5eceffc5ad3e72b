"""Smoke tests for the python module: one probe per exposed area."""

import _polyfree as pf


def check(cond, what):
    if not cond:
        raise SystemExit(f"[FAIL] {what}")
    print(f"[ok] {what}")


def main():
    xy = pf.Alphabet(["x", "y"])
    w = pf.parse_word(xy, "x y^-1 x^2")
    check(pf.format_word(xy, w) == "x y^-1 x^2", "word round trip")
    root, exponent = pf.primitive_root(pf.parse_word(xy, "x y x y"))
    check(pf.format_word(xy, root) == "x y" and exponent == 2, "primitive root")

    xi = pf.FreeMorphism(2, 2, [pf.parse_word(xy, "x y"), pf.parse_word(xy, "y")])
    ok, inverse = pf.is_automorphism_rank2(xi)
    check(ok and inverse is not None, "rank-2 recognition")
    check(pf.abelianized_matrix(xi) == [[1, 1], [0, 1]], "abelianized matrix")
    witness = pf.find_inner_witness(pf.FreeMorphism.identity(2))
    check(witness is not None and witness.is_identity(), "inner witness")

    u, d, v = pf.smith_normal_form([[2, 0], [0, 3]])
    check(d == [[1, 0], [0, 6]], "smith normal form")
    check(pf.abelian_reidemeister([[-1, 2], [0, -1]]) == 4, "abelian count")
    check(pf.abelian_reidemeister([[1, 2], [0, 1]]) == "INFINITE", "infinite count")
    check(pf.finite_quotient_count([5], [[2]]) == 1, "finite quotient count")
    check(pf.classify_gl2([[1, 3], [0, -1]]).startswith("iv"), "classification")

    length, characteristic, bound = pf.euler_data([2, 2])
    check((length, characteristic, bound) == (2, 1, "16"), "series bound")

    torus = pf.MappingTorus.make(2)
    theta = pf.family_automorphism(torus, "d", 1, 0)
    check(pf.induced_quotient_matrix(torus, theta.morphism) == [[-1, 1], [0, -1]],
          "induced quotient matrix")
    check(pf.eta_ab_image(torus, theta.morphism, 0) == {0: 1}, "kernel class of y")

    conclusion, text = pf.certify_r_infinite(torus.group(), theta.morphism)
    check(conclusion == "R_INFINITE" and "KernelWitnessFixTrivial" in text,
          "kernel certificate")

    report = pf.twisted_orbit_report_free(1, pf.FreeMorphism(1, 1, [
        pf.parse_word(pf.Alphabet(["a"]), "a^-1")]), 3, 5)
    check(report.class_upper_bound == 2, "orbit oracle")

    code, text = pf.run_job("command euler ranks=2,2\n")
    check(code == 0 and "bound: 16" in text, "job runner")

    print("smoke tests passed")


if __name__ == "__main__":
    main()
