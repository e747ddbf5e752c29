#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tenspec/audit.hpp"
#include "tenspec/entropy.hpp"
#include "tenspec/errors.hpp"
#include "tenspec/io.hpp"
#include "tenspec/norm.hpp"
#include "tenspec/perron.hpp"
#include "tenspec/random.hpp"
#include "tenspec/structure.hpp"
#include "tenspec/tropical.hpp"
#include "tenspec/version.hpp"

namespace py = pybind11;
using namespace tenspec;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

DenseTensor to_tensor(const Array& a) {
    std::vector<std::size_t> dims(a.shape(), a.shape() + a.ndim());
    std::vector<double> v(a.data(), a.data() + a.size());
    DenseTensor t(Shape(std::move(dims)), std::move(v), false);
    if (t.shape().equidimensional() && t.order() >= 2 && is_tail_symmetric(t)) return t.with_flag(true);
    return t;
}

Array to_array(const DenseTensor& t) {
    std::vector<py::ssize_t> dims(t.shape().dims().begin(), t.shape().dims().end());
    Array a(dims);
    std::copy(t.values().begin(), t.values().end(), a.mutable_data());
    return a;
}

py::dict certificate(const EigenCertificate& c) {
    py::dict d;
    d["rho"] = c.rho;
    d["u"] = c.u;
    d["u_max"] = c.u_max;
    d["cw_lower"] = c.cw_lower;
    d["cw_upper"] = c.cw_upper;
    d["iterations"] = c.iterations;
    d["residual"] = c.residual;
    d["regularized"] = c.regularized;
    if (c.has_left_data()) {
        d["w"] = c.w;
        d["A"] = c.A;
    }
    return d;
}

py::dict structure_dict(const StructureResult& r) {
    py::dict d;
    d["holds"] = r.holds;
    if (r.witness) d["witness"] = *r.witness;
    return d;
}

py::dict pair_dict(const TropicalEigenPair& p, const SparseSupportTensor& s) {
    py::dict d;
    d["rho_trop"] = p.rho_trop;
    d["log_rho_trop"] = p.log_rho_trop;
    d["v"] = p.v;
    d["method"] = method_name(p.method);
    d["iterations"] = p.iterations;
    d["residual"] = tropical_eigen_residual(s, p);
    if (p.optimal_policy) {
        py::list pol;
        for (const auto& c : p.optimal_policy->choice) {
            if (c)
                pol.append(py::cast(s.entries()[*c].idx));
            else
                pol.append(py::none());
        }
        d["policy"] = pol;
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(_tenspec, m) {
    m.doc() = "Spectral theory of nonnegative tensors: Perron, tropical and entropic certificates";
    m.attr("__version__") = kVersion;

    static py::exception<ShapeError> shape_error(m, "ShapeError", PyExc_ValueError);
    static py::exception<DomainError> domain_error(m, "DomainError", PyExc_ValueError);
    static py::exception<ConvergenceError> convergence_error(m, "ConvergenceError", PyExc_RuntimeError);
    static py::exception<CapabilityError> capability_error(m, "CapabilityError", PyExc_RuntimeError);
    static py::exception<ParseError> parse_error(m, "ParseError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ShapeError& e) {
            py::set_error(shape_error, e.what());
        } catch (const DomainError& e) {
            py::set_error(domain_error, e.what());
        } catch (const ConvergenceError& e) {
            py::set_error(convergence_error, e.what());
        } catch (const CapabilityError& e) {
            py::set_error(capability_error, e.what());
        } catch (const ParseError& e) {
            py::set_error(parse_error, e.what());
        }
    });

    m.def("load_tensor", [](const std::string& path) { return to_array(load_tensor(path).dense); }, py::arg("path"));
    m.def(
        "random_tensor",
        [](std::size_t n, std::size_t d, double density, std::uint64_t seed, bool weakly_irreducible) {
            Rng rng(seed);
            return to_array(random_tensor(rng, {n, d, density, weakly_irreducible}));
        },
        py::arg("n"), py::arg("d"), py::arg("density") = 1.0, py::arg("seed") = 0, py::arg("weakly_irreducible") = true);
    m.def("symmetrize_tail", [](const Array& t) { return to_array(symmetrize_tail(to_tensor(t))); }, py::arg("t"));
    m.def("apply", [](const Array& t, const Vector& x) { return apply(to_tensor(t), x); }, py::arg("t"), py::arg("x"));

    m.def(
        "structure",
        [](const Array& a) {
            const DenseTensor t = to_tensor(a);
            const StructureReport r = analyze_structure(t);
            py::dict d;
            d["weakly_indecomposable"] = structure_dict(r.weakly_indecomposable);
            if (r.indecomposable) d["indecomposable"] = structure_dict(*r.indecomposable);
            if (r.weakly_irreducible) d["weakly_irreducible"] = structure_dict(*r.weakly_irreducible);
            if (r.irreducible) d["irreducible"] = structure_dict(*r.irreducible);
            return d;
        },
        py::arg("t"));

    m.def(
        "spectral_radius",
        [](const Array& t, double tol, std::size_t max_iter) {
            PerronOptions o;
            o.tol = tol;
            o.max_iter = max_iter;
            return certificate(spectral_radius(to_tensor(t), o));
        },
        py::arg("t"), py::arg("tol") = 1e-10, py::arg("max_iter") = 100000);
    m.def(
        "collatz_wielandt",
        [](const Array& t, const Vector& x) {
            const CwBounds b = collatz_wielandt(to_tensor(t), x);
            return py::make_tuple(b.lower, b.upper);
        },
        py::arg("t"), py::arg("x"));
    m.def(
        "perturbation_coefficient",
        [](const Array& t, const Array& s) {
            const DenseTensor tt = to_tensor(t);
            return perturbation_coefficient(tt, to_tensor(s), spectral_radius(tt));
        },
        py::arg("t"), py::arg("s"));
    m.def(
        "diagonal_equivalence",
        [](const Array& t, const Vector& u, const Vector& w) {
            const ScalingCertificate c = diagonal_equivalence(to_tensor(t), u, w);
            const auto [r1, r2] = scaling_residuals(c, u, w);
            py::dict d;
            d["b"] = c.b;
            d["c"] = c.c;
            d["scaled"] = to_array(c.scaled);
            d["eigen_residual"] = r1;
            d["left_residual"] = r2;
            d["iterations"] = c.iterations;
            return d;
        },
        py::arg("t"), py::arg("u"), py::arg("w"));

    m.def(
        "optimal_measure",
        [](const Array& t) {
            const DenseTensor tt = to_tensor(t);
            return to_array(optimal_tensor_measure(tt, spectral_radius(tt)));
        },
        py::arg("t"));
    m.def(
        "entropy_objective",
        [](const Array& t, const Array& mu) -> double {
            return tensor_entropy_objective(to_tensor(t), to_tensor(mu)).value_or(-std::numeric_limits<double>::infinity());
        },
        py::arg("t"), py::arg("mu"));
    m.def(
        "donsker_varadhan",
        [](const Array& t, const Vector& p) -> double {
            return donsker_varadhan(to_tensor(t), p).value_or(-std::numeric_limits<double>::infinity());
        },
        py::arg("t"), py::arg("p"));
    m.def("donsker_varadhan_exp", [](const Array& t, const Vector& p) { return donsker_varadhan_exp(to_tensor(t), p); },
          py::arg("t"), py::arg("p"));

    m.def(
        "tropical",
        [](const Array& t, const std::string& method) {
            const SparseSupportTensor s = sparse_from_dense(to_tensor(t));
            if (method == "km") return pair_dict(tropical_eigenpair_km(s), s);
            if (method == "policy") return pair_dict(tropical_eigenpair_policy(s), s);
            if (method == "cycles") return pair_dict(tropical_radius_by_cycles(s), s);
            throw DomainError("method must be km, policy or cycles");
        },
        py::arg("t"), py::arg("method") = "policy");
    m.def(
        "rho_infinity",
        [](const Array& t) {
            const RhoInfinity r = rho_infinity(to_tensor(t));
            py::dict d;
            d["value"] = r.value;
            d["trace"] = r.trace;
            d["regularized"] = r.regularized;
            return d;
        },
        py::arg("t"));

    m.def(
        "spectral_norm",
        [](const Array& t, std::size_t restarts, std::uint64_t seed) {
            NormOptions o;
            o.restarts = restarts;
            o.seed = seed;
            const NormCertificate c = spectral_norm(to_tensor(t), o);
            py::dict d;
            d["value"] = c.value;
            d["maximizers"] = c.maximizers;
            d["is_lower_bound"] = c.is_lower_bound;
            d["agreeing_starts"] = c.agreeing_starts;
            return d;
        },
        py::arg("t"), py::arg("restarts") = 16, py::arg("seed") = 0);

    m.def(
        "audit_json",
        [](const Array& t, const std::string& suite, std::uint64_t seed) {
            return to_json(run_audit(to_tensor(t), suite, seed)).dump();
        },
        py::arg("t"), py::arg("suite") = "all", py::arg("seed") = 0);
}
