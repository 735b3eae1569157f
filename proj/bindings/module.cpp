#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "lrr/concentration.hpp"
#include "lrr/io.hpp"
#include "lrr/linalg.hpp"
#include "lrr/nets.hpp"
#include "lrr/prob.hpp"
#include "lrr/recovery.hpp"
#include "lrr/rng.hpp"
#include "lrr/sensing.hpp"
#include "lrr/version.hpp"

namespace py = pybind11;
using namespace lrr;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Low-rank matrix recovery, sampling operators, and matrix "
            "concentration experiments";
  m.attr("__version__") = LRR_VERSION;

  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_RuntimeError);

  // rng -----------------------------------------------------------------
  py::class_<RngStream>(m, "RngStream",
                        "Counter-based random stream addressed by "
                        "(seed, stream_id); fork(k) yields independent "
                        "children regardless of how far the parent advanced.")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"),
           py::arg("stream_id") = 0)
      .def("next_u64", &RngStream::next_u64)
      .def("next_unit", &RngStream::next_unit)
      .def("next_gaussian", &RngStream::next_gaussian)
      .def("next_sign", &RngStream::next_sign)
      .def("next_below", &RngStream::next_below, py::arg("bound"))
      .def("fork", &RngStream::fork, py::arg("k"))
      .def_property_readonly("seed", &RngStream::seed)
      .def_property_readonly("stream_id", &RngStream::stream_id);

  // linalg ------------------------------------------------------------------
  py::class_<SvdFactors>(m, "SvdFactors")
      .def_readonly("u", &SvdFactors::u)
      .def_readonly("sigmas", &SvdFactors::sigmas)
      .def_readonly("v", &SvdFactors::v)
      .def_readonly("numerical_rank", &SvdFactors::numerical_rank)
      .def_readonly("rank_tol", &SvdFactors::rank_tol);
  py::class_<SymEig>(m, "SymEig")
      .def_readonly("q", &SymEig::q)
      .def_readonly("lambdas", &SymEig::lambdas);
  m.def("default_rank_tol", &default_rank_tol, py::arg("a"));
  m.def("svd", &svd, py::arg("a"), py::arg("rank_tol") = -1.0);
  m.def("sym_eig", &sym_eig, py::arg("s"));
  m.def("frobenius_inner", &frobenius_inner, py::arg("a"), py::arg("b"));
  m.def("schatten_norm", &schatten_norm, py::arg("a"), py::arg("p"));
  m.def("nuclear_norm", &nuclear_norm, py::arg("a"));
  m.def("operator_norm", &operator_norm, py::arg("a"));
  m.def("sgn", &sgn, py::arg("a"), py::arg("rank_tol") = -1.0);
  m.def("sym_expm", &sym_expm, py::arg("s"));
  m.def("sym_logm", &sym_logm, py::arg("s"));
  m.def("expm", &expm, py::arg("a"));
  m.def("singular_triangle_gap", &singular_triangle_gap, py::arg("a"),
        py::arg("b"));
  m.def("nuclear_duality_gap", &nuclear_duality_gap, py::arg("a"),
        py::arg("probes"), py::arg("rng"));

  // prob ------------------------------------------------------------------
  py::class_<PointSet>(m, "PointSet")
      .def(py::init([](std::vector<Vector> points,
                       std::optional<Vector> weights) {
             return make_point_set(std::move(points), std::move(weights));
           }),
           py::arg("points"), py::arg("weights") = std::nullopt)
      .def_readonly("dim", &PointSet::dim)
      .def_readonly("points", &PointSet::points)
      .def_readonly("weights", &PointSet::weights);

  py::class_<TailReport>(m, "TailReport")
      .def_readonly("thresholds", &TailReport::thresholds)
      .def_readonly("empirical", &TailReport::empirical)
      .def_readonly("bound", &TailReport::bound)
      .def_readonly("trials", &TailReport::trials);

  m.def("tail_slack", &tail_slack, py::arg("bound"), py::arg("trials"));
  m.def("gaussian_vector", &gaussian_vector, py::arg("rng"), py::arg("dim"));
  m.def("chi2_mgf", &chi2_mgf, py::arg("lam"));
  m.def("two_stability_report", &two_stability_report, py::arg("lam"),
        py::arg("trials"), py::arg("rng"), py::arg("threads") = 1);
  m.def("chi2_tail_experiment", &chi2_tail_experiment, py::arg("m"),
        py::arg("eps"), py::arg("trials"), py::arg("rng"),
        py::arg("threads") = 1);
  m.def("chi2_tail_bound", &chi2_tail_bound, py::arg("m"), py::arg("eps"));

  py::class_<CaratheodoryResult>(m, "CaratheodoryResult")
      .def_readonly("approx", &CaratheodoryResult::approx)
      .def_readonly("err", &CaratheodoryResult::err);
  m.def("approx_caratheodory", &approx_caratheodory, py::arg("set"),
        py::arg("weights"), py::arg("n_points"), py::arg("rng"));
  m.def("radius", &radius, py::arg("set"));

  py::class_<MonteCarloResult>(m, "MonteCarloResult")
      .def_readonly("estimate", &MonteCarloResult::estimate)
      .def_readonly("rms_bound", &MonteCarloResult::rms_bound);
  m.def("monte_carlo_integrate", &monte_carlo_integrate, py::arg("sampler"),
        py::arg("n"), py::arg("rng"), py::arg("f_l2") = std::nullopt);

  m.def("jl_min_dim", &jl_min_dim, py::arg("n_points"), py::arg("eps"));
  py::class_<JlResult>(m, "JlResult")
      .def_readonly("embedded", &JlResult::embedded)
      .def_readonly("max_distortion", &JlResult::max_distortion)
      .def_readonly("success", &JlResult::success);
  m.def("jl_embed", &jl_embed, py::arg("set"), py::arg("eps"), py::arg("m"),
        py::arg("rng"));

  // nets --------------------------------------------------------------
  py::class_<Net>(m, "Net")
      .def_property_readonly(
          "ambient", [](const Net& net) { return net_ambient_name(net.ambient); })
      .def_readonly("n", &Net::n)
      .def_readonly("k", &Net::k)
      .def_readonly("r", &Net::r)
      .def_readonly("eps", &Net::eps)
      .def_readonly("elements", &Net::elements)
      .def_readonly("projection_dist", &Net::projection_dist);
  m.def("net_cardinality_bound", &net_cardinality_bound, py::arg("eps"),
        py::arg("exponent"));
  m.def("dist_two_inf", &dist_two_inf, py::arg("a"), py::arg("b"));
  m.def("sphere_net", &sphere_net, py::arg("n"), py::arg("eps"), py::arg("rng"),
        py::arg("cap") = 1000000);
  m.def("ball_net", &ball_net, py::arg("n"), py::arg("eps"), py::arg("rng"),
        py::arg("cap") = 1000000);
  m.def("stiefel_net", &stiefel_net, py::arg("n"), py::arg("k"), py::arg("eps"),
        py::arg("rng"), py::arg("cap") = 1000000);
  m.def("lowrank_net", &lowrank_net, py::arg("n"), py::arg("N"), py::arg("r"),
        py::arg("rho"), py::arg("rng"), py::arg("cap") = 1000000);
  m.def("net_operator_norm_bound", &net_operator_norm_bound, py::arg("apply"),
        py::arg("net"), py::arg("eps"));

  // sensing ---------------------------------------------------------------
  py::class_<GaussianMap>(m, "GaussianMap")
      .def_readonly("m", &GaussianMap::m)
      .def_readonly("rows", &GaussianMap::rows)
      .def_readonly("cols", &GaussianMap::cols)
      .def_readonly("mats", &GaussianMap::mats)
      .def_readonly("seed", &GaussianMap::seed)
      .def_readonly("stream_id", &GaussianMap::stream_id)
      .def_readonly("from_seed", &GaussianMap::from_seed);
  m.def("gaussian_map_new", &gaussian_map_new, py::arg("rng"), py::arg("m"),
        py::arg("rows"), py::arg("cols"));
  m.def("gaussian_map_from_layout", &gaussian_map_from_layout, py::arg("seed"),
        py::arg("stream_id"), py::arg("m"), py::arg("rows"), py::arg("cols"));
  m.def("map_from_mats", &map_from_mats, py::arg("mats"));
  m.def("apply_map", &apply_map, py::arg("map"), py::arg("a"));
  m.def("fixed_vector_isometry_experiment", &fixed_vector_isometry_experiment,
        py::arg("m"), py::arg("trials"), py::arg("ts"), py::arg("rng"),
        py::arg("threads") = 1);
  m.def("fixed_vector_isometry_bound", &fixed_vector_isometry_bound,
        py::arg("m"), py::arg("t"));

  m.def("entry_basis_element", &entry_basis_element, py::arg("n"), py::arg("k"),
        py::arg("l"));
  py::class_<OperatorBasis>(m, "OperatorBasis")
      .def_static("entry", &OperatorBasis::entry, py::arg("n"))
      .def_static("explicit_basis", &OperatorBasis::explicit_basis,
                  py::arg("mats"))
      .def_property_readonly("n", &OperatorBasis::n)
      .def_property_readonly("size", &OperatorBasis::size)
      .def_property_readonly("is_entry", &OperatorBasis::is_entry)
      .def("element", &OperatorBasis::element, py::arg("a"))
      .def("inner", &OperatorBasis::inner, py::arg("a"), py::arg("z"));

  m.def("sample_indices", &sample_indices, py::arg("rng"), py::arg("n_sq"),
        py::arg("m"), py::arg("replacement"));

  py::class_<SamplingOperator>(m, "SamplingOperator")
      .def_readonly("basis", &SamplingOperator::basis)
      .def_readonly("omegas", &SamplingOperator::omegas)
      .def_readonly("n", &SamplingOperator::n)
      .def_readonly("replacement", &SamplingOperator::replacement);
  m.def("make_sampling_operator", &make_sampling_operator, py::arg("basis"),
        py::arg("omegas"), py::arg("replacement"));
  m.def("sample_operator", &sample_operator, py::arg("basis"), py::arg("m"),
        py::arg("replacement"), py::arg("rng"));
  m.def("sampling_apply", &sampling_apply, py::arg("op"), py::arg("z"));
  m.def("sampling_measure", &sampling_measure, py::arg("op"), py::arg("z"));

  py::class_<TangentProjector>(m, "TangentProjector")
      .def_readonly("u_basis", &TangentProjector::u_basis);
  m.def("tangent_projector", &tangent_projector, py::arg("u_basis"));
  m.def("tangent_projector_at", &tangent_projector_at, py::arg("a"),
        py::arg("rank_tol") = -1.0);
  m.def("tangent_project", &tangent_project, py::arg("p"), py::arg("z"));
  m.def("tangent_complement", &tangent_complement, py::arg("p"), py::arg("z"));

  py::class_<CoherenceReport>(m, "CoherenceReport")
      .def_readonly("nu_basis", &CoherenceReport::nu_basis)
      .def_readonly("nu_pair_tangent", &CoherenceReport::nu_pair_tangent)
      .def_readonly("nu_pair_sgn", &CoherenceReport::nu_pair_sgn)
      .def_readonly("mu1", &CoherenceReport::mu1)
      .def_readonly("mu2", &CoherenceReport::mu2)
      .def_readonly("entry_basis", &CoherenceReport::entry_basis)
      .def_readonly("n", &CoherenceReport::n)
      .def_readonly("r", &CoherenceReport::r);
  m.def("coherence", &coherence, py::arg("basis"), py::arg("a"), py::arg("p"));

  m.def("sparse_rip_constant", &sparse_rip_constant, py::arg("a"), py::arg("k"));
  m.def("matrix_rip_estimate", &matrix_rip_estimate, py::arg("map"),
        py::arg("r"), py::arg("probes"), py::arg("rng"));
  m.def("matrix_rip_suggested_m", &matrix_rip_suggested_m, py::arg("n"),
        py::arg("N"), py::arg("r"), py::arg("delta"), py::arg("eps"));

  // recovery ----------------------------------------------------------------
  py::class_<Measurement>(m, "Measurement")
      .def(py::init<GaussianMap>(), py::arg("map"))
      .def(py::init<SamplingOperator>(), py::arg("op"))
      .def_property_readonly("is_sampling", &Measurement::is_sampling)
      .def_property_readonly("rows", &Measurement::rows)
      .def_property_readonly("cols", &Measurement::cols)
      .def_property_readonly("count", &Measurement::count)
      .def("measure", &Measurement::measure, py::arg("z"))
      .def("stacked", &Measurement::stacked);

  m.def("svt", &svt, py::arg("a"), py::arg("tau"));
  m.def("affine_project", &affine_project, py::arg("meas"), py::arg("y"),
        py::arg("z"));

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("step", &SolverConfig::step)
      .def_readwrite("tol_residual", &SolverConfig::tol_residual)
      .def_readwrite("tol_change", &SolverConfig::tol_change)
      .def_readwrite("max_iter", &SolverConfig::max_iter);

  py::class_<RecoveryReport>(m, "RecoveryReport")
      .def_readonly("solution", &RecoveryReport::solution)
      .def_readonly("iterations", &RecoveryReport::iterations)
      .def_readonly("constraint_residual", &RecoveryReport::constraint_residual)
      .def_readonly("objective", &RecoveryReport::objective)
      .def_readonly("converged", &RecoveryReport::converged);
  m.def("complete", &complete, py::arg("meas"), py::arg("y"),
        py::arg("cfg") = SolverConfig{});

  py::class_<NspReport>(m, "NspReport")
      .def_readonly("violated", &NspReport::violated)
      .def_readonly("witness", &NspReport::witness)
      .def_readonly("margin", &NspReport::margin)
      .def_readonly("budget_used", &NspReport::budget_used);
  m.def("nsp_falsify", &nsp_falsify, py::arg("a"), py::arg("k"),
        py::arg("budget"), py::arg("rng"));
  m.def("rank_nsp_falsify", &rank_nsp_falsify, py::arg("meas"), py::arg("r"),
        py::arg("budget"), py::arg("rng"));

  py::class_<DualCertificate>(m, "DualCertificate")
      .def_readonly("y", &DualCertificate::y)
      .def_readonly("batch_sizes", &DualCertificate::batch_sizes)
      .def_readonly("residual_norms", &DualCertificate::residual_norms)
      .def_readonly("cond_tangent", &DualCertificate::cond_tangent)
      .def_readonly("cond_complement", &DualCertificate::cond_complement)
      .def_readonly("omegas", &DualCertificate::omegas);
  m.def("golfing_certificate", &golfing_certificate, py::arg("basis"),
        py::arg("a"), py::arg("p"), py::arg("batch_sizes"), py::arg("rng"));
  m.def("golfing_certificate_batches", &golfing_certificate_batches,
        py::arg("basis"), py::arg("a"), py::arg("p"), py::arg("batches"));
  m.def("golfing_rounds", &golfing_rounds, py::arg("n"), py::arg("r"));
  m.def("golfing_batch_size", &golfing_batch_size, py::arg("nu"), py::arg("r"),
        py::arg("n"), py::arg("l"), py::arg("beta"));

  py::class_<CertificateCheck>(m, "CertificateCheck")
      .def_readonly("in_range", &CertificateCheck::in_range)
      .def_readonly("cond_ii", &CertificateCheck::cond_ii)
      .def_readonly("cond_iii", &CertificateCheck::cond_iii)
      .def_readonly("range_gap", &CertificateCheck::range_gap)
      .def_readonly("tangent_gap", &CertificateCheck::tangent_gap)
      .def_readonly("complement_norm", &CertificateCheck::complement_norm);
  m.def("verify_certificate", &verify_certificate, py::arg("cert"),
        py::arg("basis"), py::arg("a"), py::arg("p"));

  m.def("tangent_restricted_operator_norm", &tangent_restricted_operator_norm,
        py::arg("basis"), py::arg("p"), py::arg("omegas"));
  m.def("tangent_operator_bound", &tangent_operator_bound, py::arg("nu"),
        py::arg("r"), py::arg("n"), py::arg("m"), py::arg("t"));
  m.def("tangent_operator_concentration", &tangent_operator_concentration,
        py::arg("basis"), py::arg("p"), py::arg("m"), py::arg("trials"),
        py::arg("ts"), py::arg("rng"), py::arg("threads") = 1);

  // concentration ---------------------------------------------------------
  py::enum_<EnsembleKind>(m, "EnsembleKind")
      .value("RademacherWeighted", EnsembleKind::kRademacherWeighted)
      .value("GaussianWeighted", EnsembleKind::kGaussianWeighted)
      .value("RandomDyad", EnsembleKind::kRandomDyad);

  py::class_<MatrixEnsemble>(m, "MatrixEnsemble")
      .def_readonly("kind", &MatrixEnsemble::kind)
      .def_readonly("n", &MatrixEnsemble::n)
      .def_readonly("b", &MatrixEnsemble::b);
  m.def("rademacher_ensemble", &rademacher_ensemble, py::arg("b"));
  m.def("gaussian_ensemble", &gaussian_ensemble, py::arg("b"));
  m.def("dyad_ensemble", &dyad_ensemble, py::arg("n"));
  m.def("ensemble_sample", &ensemble_sample, py::arg("e"), py::arg("rng"));

  py::class_<BernsteinParams>(m, "BernsteinParams")
      .def_readonly("v0_sq", &BernsteinParams::v0_sq)
      .def_readonly("c", &BernsteinParams::c)
      .def_readonly("sigma_sq", &BernsteinParams::sigma_sq)
      .def_readonly("k_bound", &BernsteinParams::k_bound)
      .def_readonly("empirical_samples", &BernsteinParams::empirical_samples);
  m.def("ensemble_params", &ensemble_params, py::arg("e"),
        py::arg("empirical_samples"), py::arg("rng"));
  m.def("scale_params", &scale_params, py::arg("p"), py::arg("m"));

  m.def("lie_product_errors", &lie_product_errors, py::arg("a"), py::arg("b"),
        py::arg("ns"));
  m.def("golden_thompson_gap", &golden_thompson_gap, py::arg("a"), py::arg("b"));
  m.def("lieb_concavity_probe", &lieb_concavity_probe, py::arg("h"),
        py::arg("a"), py::arg("b"));
  m.def("bernstein_bound_theo", &bernstein_bound_theo, py::arg("n"),
        py::arg("m"), py::arg("v0_sq"), py::arg("c"), py::arg("t"));
  m.def("bernstein_bound_lieb", &bernstein_bound_lieb, py::arg("n"),
        py::arg("m"), py::arg("v0_sq"), py::arg("c"), py::arg("t"));

  py::class_<BernsteinTailReport>(m, "BernsteinTailReport")
      .def_readonly("thresholds", &BernsteinTailReport::thresholds)
      .def_readonly("empirical", &BernsteinTailReport::empirical)
      .def_readonly("bound_theo", &BernsteinTailReport::bound_theo)
      .def_readonly("bound_lieb", &BernsteinTailReport::bound_lieb)
      .def_readonly("trials", &BernsteinTailReport::trials)
      .def_readonly("n", &BernsteinTailReport::n)
      .def_readonly("m", &BernsteinTailReport::m)
      .def_readonly("params", &BernsteinTailReport::params);
  m.def("bernstein_tail_experiment", &bernstein_tail_experiment, py::arg("e"),
        py::arg("m"), py::arg("ts"), py::arg("trials"), py::arg("rng"),
        py::arg("threads") = 1);

  // io ----------------------------------------------------------------------
  m.def("write_matrix_csv", &write_matrix_csv, py::arg("path"), py::arg("a"));
  m.def("read_matrix_csv", &read_matrix_csv, py::arg("path"));
  m.def("write_sampling_operator_json", &write_sampling_operator_json,
        py::arg("path"), py::arg("op"));
  m.def("read_sampling_operator_json", &read_sampling_operator_json,
        py::arg("path"));
  m.def("write_gaussian_map_json", &write_gaussian_map_json, py::arg("path"),
        py::arg("map"));
  m.def("read_gaussian_map_json", &read_gaussian_map_json, py::arg("path"));
}
