#pragma once

#include <string>
#include <vector>

#include "fracsde/core.hpp"

namespace fracsde {

struct CatalogEntry {
    std::string id;
    std::string summary;
    ProblemSpec problem;
};

/// Built-in benchmark problems, all scalar with bounded trigonometric
/// drift and diffusion on [0, 1].
const std::vector<CatalogEntry>& problem_catalog();

/// Lookup by id; throws BadConfig naming the known ids.
const CatalogEntry& find_problem(const std::string& id);

}  // namespace fracsde
