#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polyfree/job.hpp"
#include "polyfree/twisted.hpp"

namespace py = pybind11;
using namespace polyfree;

namespace {

IntMatrix matrix_from_rows(const std::vector<std::vector<long long>>& rows) {
  if (rows.empty()) throw std::invalid_argument("empty matrix");
  std::vector<long long> flat;
  for (const auto& r : rows) {
    if (r.size() != rows.front().size()) throw std::invalid_argument("ragged matrix");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return IntMatrix(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()),
                   std::move(flat));
}

std::vector<std::vector<long long>> matrix_rows(const IntMatrix& m) {
  std::vector<std::vector<long long>> rows(m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) rows[i].push_back(m.at(i, j));
  return rows;
}

}  // namespace

PYBIND11_MODULE(_polyfree, m) {
  m.doc() = "Exact computations with length-2 polyfree groups: words, semidirect "
            "products, mapping tori, twisted conjugacy counts and certificates.";

  py::register_exception<ResourceCapError>(m, "ResourceCapError");

  // --- words --------------------------------------------------------------
  py::class_<Alphabet>(m, "Alphabet")
      .def(py::init<std::vector<std::string>>())
      .def("rank", &Alphabet::rank);
  py::class_<Word>(m, "Word")
      .def("rank", &Word::rank)
      .def("length", &Word::length)
      .def("is_identity", &Word::is_identity)
      .def("__eq__", [](const Word& a, const Word& b) { return a == b; })
      .def("__mul__", [](const Word& a, const Word& b) { return a * b; })
      .def("inverse", [](const Word& w) { return inverse(w); });
  m.def("parse_word", &parse_word);
  m.def("format_word", &format_word);
  m.def("cyclic_reduce", [](const Word& w) {
    CyclicForm c = cyclic_reduce(w);
    return py::make_tuple(c.core, c.conjugator);
  });
  m.def("primitive_root", [](const Word& w) {
    RootPower r = primitive_root(w);
    return py::make_tuple(r.root, r.exponent);
  });
  m.def("exponent_sum", &exponent_sum);
  m.def("word_ball", &word_ball);

  // --- free morphisms -----------------------------------------------------
  py::class_<FreeMorphism>(m, "FreeMorphism")
      .def(py::init<int, int, std::vector<Word>>())
      .def_static("identity", &FreeMorphism::identity)
      .def("apply", &FreeMorphism::apply)
      .def("__eq__", [](const FreeMorphism& a, const FreeMorphism& b) { return a == b; });
  m.def("compose", [](const FreeMorphism& f, const FreeMorphism& g) { return compose(f, g); });
  m.def("is_automorphism_rank2", [](const FreeMorphism& f) {
    Rank2Recognition r = recognize_rank2_automorphism(f);
    return py::make_tuple(r.is_automorphism, r.inverse);
  });
  m.def("find_inner_witness",
        [](const FreeMorphism& f, size_t max_length) { return find_inner_witness(f, max_length); },
        py::arg("f"), py::arg("max_length") = 64);
  m.def("abelianized_matrix",
        [](const FreeMorphism& f) { return matrix_rows(abelianized_matrix(f)); });

  // --- integer matrices ---------------------------------------------------
  m.def("smith_normal_form", [](const std::vector<std::vector<long long>>& rows) {
    SmithDecomposition s = smith_normal_form(matrix_from_rows(rows));
    return py::make_tuple(matrix_rows(s.u), matrix_rows(s.d), matrix_rows(s.v));
  });
  m.def("cokernel_structure", [](const std::vector<std::vector<long long>>& rows) {
    AbelianGroupStructure g = cokernel_structure(matrix_from_rows(rows));
    return py::make_tuple(g.free_rank, g.torsion);
  });
  m.def("abelian_reidemeister", [](const std::vector<std::vector<long long>>& rows) {
    ReidemeisterCount c = abelian_reidemeister(matrix_from_rows(rows));
    return c.infinite ? py::object(py::str("INFINITE")) : py::object(py::int_(c.value));
  });
  m.def("fixed_sublattice_trivial", [](const std::vector<std::vector<long long>>& rows) {
    return fixed_sublattice_trivial(matrix_from_rows(rows));
  });
  m.def("finite_quotient_count",
        [](const std::vector<long long>& moduli, const std::vector<std::vector<long long>>& rows) {
          return finite_quotient_count(moduli, matrix_from_rows(rows));
        });
  m.def("classify_gl2", [](const std::vector<std::vector<long long>>& rows) {
    return torus_class_name(classify_gl2_torus(matrix_from_rows(rows)));
  });

  // --- polyfree groups ----------------------------------------------------
  py::class_<PfElement>(m, "PfElement")
      .def_readonly("kernel", &PfElement::kernel)
      .def_readonly("quotient", &PfElement::quotient)
      .def("is_identity", &PfElement::is_identity)
      .def("__eq__", [](const PfElement& a, const PfElement& b) { return a == b; });
  py::class_<PfGroup>(m, "PfGroup")
      .def_static("direct_product", &PfGroup::direct_product)
      .def("kernel_rank", &PfGroup::kernel_rank)
      .def("quotient_rank", &PfGroup::quotient_rank)
      .def("identity", &PfGroup::identity)
      .def("element", &PfGroup::element)
      .def("multiply", &PfGroup::multiply)
      .def("invert", &PfGroup::invert);
  m.def("semidirect",
        [](int r, int s, const std::vector<FreeMorphism>& twists) {
          std::vector<std::pair<FreeMorphism, std::optional<FreeMorphism>>> data;
          for (const auto& t : twists) data.emplace_back(t, std::nullopt);
          return PfGroup::semidirect(r, s, std::move(data));
        },
        "Semidirect product from presentation maps (inverses derived for rank <= 2)");
  m.def("ball_enumerate", [](const PfGroup& g, int radius) { return ball_enumerate(g, radius); });

  py::class_<PfMorphism>(m, "PfMorphism")
      .def_static("identity", &PfMorphism::identity)
      .def_readwrite("kernel_images", &PfMorphism::kernel_images)
      .def_readwrite("quotient_images", &PfMorphism::quotient_images);
  m.def("pf_apply", &pf_apply);
  m.def("verify_endomorphism", &verify_endomorphism);
  m.def("preserves_series", &preserves_series);

  auto descriptor_dict = [](const PfGroup& g, const SubgroupDescriptor& d) {
    py::dict out;
    out["tag"] = d.tag_name();
    GroupNaming naming = default_naming(g);
    if (d.kernel_root) out["kernel_root"] = format_word(naming.kernel, *d.kernel_root);
    if (d.quotient_root)
      out["quotient_root"] = format_word(naming.quotient, *d.quotient_root);
    if (d.twisted_offset) out["twisted_offset"] = *d.twisted_offset;
    out["interpretation_dependent"] = d.interpretation_dependent;
    if (!d.note.empty()) out["note"] = d.note;
    return out;
  };
  m.def("centralizer_direct_product",
        [descriptor_dict](const PfGroup& g, const PfElement& e) {
          return descriptor_dict(g, centralizer_direct_product(g, e));
        });
  m.def("centralizer_z_semidirect",
        [descriptor_dict](const PfGroup& g, const PfElement& e) {
          return descriptor_dict(g, centralizer_z_semidirect(g, e));
        });
  m.def("center_conjugation_case", [](const PfGroup& g, const Word& w) {
    CenterReport r = center_conjugation_case(g, w);
    return py::make_tuple(r.center, r.checks);
  });

  m.def("euler_data", [](const std::vector<long long>& ranks) {
    EulerData d = euler_data({ranks});
    return py::make_tuple(d.length, d.characteristic,
                          d.bound_applicable ? py::object(py::str(d.bound.to_string()))
                                             : py::object(py::str("NOT_APPLICABLE")));
  });

  // --- mapping tori ---------------------------------------------------------
  py::class_<MappingTorus>(m, "MappingTorus")
      .def_static("make", &MappingTorus::make)
      .def("k", &MappingTorus::k)
      .def("group", &MappingTorus::group);
  py::class_<FamilyAutomorphism>(m, "FamilyAutomorphism")
      .def_readonly("morphism", &FamilyAutomorphism::morphism);
  m.def("family_automorphism",
        [](const MappingTorus& t, const std::string& form, long long mm, long long i) {
          return family_automorphism(t, parse_family_form(form), mm, i);
        });
  m.def("induced_quotient_matrix", [](const MappingTorus& t, const PfMorphism& f) {
    return matrix_rows(induced_quotient_matrix(t, f));
  });
  m.def("rs_rewrite", [](const MappingTorus& t, const PfElement& e) {
    SupportedVector sv = rs_rewrite(t, e);
    return std::map<long long, long long>(sv.terms().begin(), sv.terms().end());
  });
  m.def("eta_ab_image", [](const MappingTorus& t, const PfMorphism& f, long long index) {
    SupportedVector sv = eta_ab_image(t, f, index);
    return std::map<long long, long long>(sv.terms().begin(), sv.terms().end());
  });

  // --- twisted conjugacy ------------------------------------------------------
  py::class_<OrbitReport>(m, "OrbitReport")
      .def_readonly("ball_size", &OrbitReport::ball_size)
      .def_readonly("class_upper_bound", &OrbitReport::class_upper_bound)
      .def_readonly("invariant_lower_bound", &OrbitReport::invariant_lower_bound);
  m.def("twisted_orbit_report", &twisted_orbit_report, py::arg("group"), py::arg("morphism"),
        py::arg("ball_radius"), py::arg("conjugator_radius"), py::arg("workers") = 1);
  m.def("twisted_orbit_report_free", &twisted_orbit_report_free, py::arg("rank"),
        py::arg("morphism"), py::arg("ball_radius"), py::arg("conjugator_radius"),
        py::arg("workers") = 1);
  m.def("certify_r_infinite", [](const PfGroup& g, const PfMorphism& f) {
    Certificate c = certify_r_infinite(g, f);
    return py::make_tuple(c.conclusion_name(), c.serialize());
  });

  // --- jobs -------------------------------------------------------------------
  m.def("run_job",
        [](const std::string& text, const std::string& format) {
          Report r = run_job_text(text);
          return py::make_tuple(r.exit_code, r.to_text(format));
        },
        py::arg("text"), py::arg("format") = "stable");
}
