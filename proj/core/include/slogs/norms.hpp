#pragma once

#include "slogs/field.hpp"

namespace slogs {

/// <u, v> = integral of Re(u conj(v)), rectangle rule on the cell centres.
double inner(const ComplexField& u, const ComplexField& v);

double norm_l2(const ComplexField& u);
/// (||u||^2 + ||grad u||^2)^{1/2}.
double norm_h1(const ComplexField& u);
/// (||u||^2 + ||grad u||^2 + ||Laplacian u||^2)^{1/2}.
double norm_h2(const ComplexField& u);
/// Requires p >= 1.
double norm_lp(const ComplexField& u, double p);
/// ||(1 + |x|^2)^{alpha/2} u|| with x the centred coordinate; alpha in (0, 2].
double norm_l2_alpha(const ComplexField& u, double alpha);

}  // namespace slogs
