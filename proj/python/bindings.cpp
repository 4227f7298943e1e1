#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "styre/config.hpp"
#include "styre/montecarlo.hpp"
#include "styre/tye.hpp"

namespace py = pybind11;
using namespace styre;

namespace {

// keep the group alive alongside everything that points into it
struct PyNoise {
    std::shared_ptr<FiniteGroup> group;
    NoiseLaw law;
};

PyNoise noise_from_json(const std::string& text) {
    json doc = json::parse(text);
    PyNoise out;
    out.group = parse_group(doc.at("group"));
    out.law = parse_noise(doc.at("noise"), *out.group);
    return out;
}

}  // namespace

PYBIND11_MODULE(_styre, m) {
    m.doc() = "classification and simulation of driftless stochastic recursions "
              "on finite groups";

    py::class_<FiniteGroup, std::shared_ptr<FiniteGroup>>(m, "FiniteGroup")
        .def_readonly("order", &FiniteGroup::order)
        .def_readonly("labels", &FiniteGroup::labels)
        .def("mul", &FiniteGroup::mul)
        .def("inv", &FiniteGroup::inv)
        .def("label_index", &FiniteGroup::label_index)
        .def("is_abelian", &FiniteGroup::is_abelian);

    m.def("cyclic", [](int n) { return std::make_shared<FiniteGroup>(make_cyclic(n)); });
    m.def("symmetric", [](int n) { return std::make_shared<FiniteGroup>(make_symmetric(n)); });
    m.def("dihedral", [](int n) { return std::make_shared<FiniteGroup>(make_dihedral(n)); });

    py::class_<PyNoise>(m, "NoiseLaw")
        .def_static("from_json", &noise_from_json)
        .def_property_readonly("group", [](const PyNoise& n) { return n.group; })
        .def("measure_at",
             [](const PyNoise& n, int k) { return n.law.measure_at(k).weights; });

    m.def("classify", [](const PyNoise& noise) {
        json doc = trichotomy_to_json(classify_trichotomy(noise.law));
        return doc.dump();
    }, "trichotomy report as a JSON string");

    m.def("extremal_law", [](const PyNoise& noise) {
        json doc = entrance_law_to_json(find_extremal_entrance_law(noise.law));
        return doc.dump();
    });

    m.def("orbit", [](const PyNoise& noise) {
        OrbitReport rep = orbit_and_isotropy(find_extremal_entrance_law(noise.law));
        Subgroup iso = rep.isotropy;
        auto labels = iso.member_labels();
        std::sort(labels.begin(), labels.end());
        return py::make_tuple(rep.orbit.size(), labels,
                              rep.extremality == ExtremalityGrade::verified_vertex);
    }, "returns (orbit size, isotropy labels, verified extremal)");

    m.def("simulate_marginal", [](const PyNoise& noise, int k_min, int n, std::uint64_t seed) {
        TrajectoryBatch batch = simulate(center_entrance_law(noise.law), k_min, n, seed);
        std::vector<double> freq(noise.group->order, 0.0);
        for (int s = 0; s < batch.n_samples(); ++s) freq[batch.eta[s].back()] += 1.0 / n;
        return freq;
    }, "empirical center-law marginal at k = 0");

    m.def("torus_classify", [](const std::string& text, int nmax) {
        TorusNoise noise = parse_torus(json::parse(text));
        ZmuResult res = compute_Z_mu(noise, nmax);
        return py::make_tuple(res.generator_d, res.survivors, res.inconclusive);
    }, py::arg("config"), py::arg("nmax") = 64,
       "returns (generator d, survivors, inconclusive) certified up to nmax");

    m.attr("__version__") = STYRE_VERSION;
}
