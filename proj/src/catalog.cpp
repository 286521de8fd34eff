#include "fracsde/catalog.hpp"

#include <cmath>

namespace fracsde {

namespace {

ProblemSpec trig_problem() {
    ProblemSpec p;
    p.dim = 1;
    p.y0 = {0.1};
    p.horizon = 1.0;
    p.drift = [](double t, std::span<const double> y, std::span<double> out) {
        out[0] = std::sin(t * y[0]);
    };
    p.diffusion = [](double, std::span<const double> y, std::span<double> out) {
        out[0] = std::sin(y[0]);
    };
    return p;
}

std::vector<CatalogEntry> make_catalog() {
    std::vector<CatalogEntry> entries;
    entries.push_back({"example1",
                       "scalar benchmark, f = sin(t y), g = sin(y), y0 = 0.1, T = 1; "
                       "pair it with two differentiation orders, e.g. 0.6,0.8",
                       trig_problem()});
    entries.push_back({"example2",
                       "same drift/diffusion run as the three-order benchmark; "
                       "pair it with order triples, e.g. 0.1,0.5,0.85",
                       trig_problem()});
    return entries;
}

}  // namespace

const std::vector<CatalogEntry>& problem_catalog() {
    static const std::vector<CatalogEntry> catalog = make_catalog();
    return catalog;
}

const CatalogEntry& find_problem(const std::string& id) {
    for (const auto& entry : problem_catalog())
        if (entry.id == id) return entry;
    std::string known;
    for (const auto& entry : problem_catalog()) {
        if (!known.empty()) known += ", ";
        known += entry.id;
    }
    throw Error(Errc::bad_config, "unknown problem '" + id + "' (known: " + known + ")");
}

}  // namespace fracsde
