#ifndef STEFANLAB_MMS_HPP
#define STEFANLAB_MMS_HPP

#include <vector>

namespace stefanlab {

struct ConvergenceStudy {
    std::vector<double> resolution;  // dt (temporal) or h (spatial)
    std::vector<double> error;       // Linf error at the final time
    double order = 0.0;              // least-squares slope of log err vs log resolution
};

// Frozen-front manufactured problem u = e^{-t}(s0 - x): spatially exact,
// isolates the time integrator.
ConvergenceStudy mms_temporal_study(double theta, int levels, int n, double t_end);

// Frozen-front manufactured problem u = e^{-t} sin(pi x / s0) with dt = h^2,
// isolates the spatial discretization.
ConvergenceStudy mms_spatial_study(double theta, int levels, int n_coarse, double t_end);

}  // namespace stefanlab

#endif
