#pragma once

#include <functional>
#include <string>

#include "kinlab/vec.hpp"

namespace kinlab {

class ConvexDomain;

// Scalar function of a phase point (x, v). support: "omega" for functions
// living on the bounded domain, "whole_space" after zero extension.
// provenance: "closed_form" | "operator_composition" | "tabulated".
struct PhaseFunction {
    std::function<double(const Vec3 &, const Vec3 &)> eval;
    std::string support = "omega";
    std::string provenance = "closed_form";
    // set by zero_extend: the support geometry, letting line quadratures
    // split exactly at the support edge instead of chasing the jump
    const ConvexDomain *omega_hint = nullptr;

    double operator()(const Vec3 &x, const Vec3 &v) const {
        return eval(x, v);
    }
};

}  // namespace kinlab
