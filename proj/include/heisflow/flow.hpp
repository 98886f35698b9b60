#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "heisflow/curve.hpp"
#include "heisflow/fields.hpp"

namespace heis {

struct SpeedBoundExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct HorizonExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FlowConfig {
    double dt = 0.01;
    double t_max = 1.0;
    bool enforce_speed_limit = true;  // reject |field(gamma)| > 1 + 1e-9 at samples
    bool gronwall_check = false;

    void validate() const;
};

/// Integrates gamma' = field(gamma) with the fixed fourth-order one-step
/// scheme on the coupled (h, z) system; the stored z is re-derived from the
/// trapezoidal symplectic-area rule, so each step is exactly horizontal.
HorizontalCurve integrate(const HPoint& seed, const HVectorField& field, const FlowConfig& config);

/// Flow map with a write-once trajectory cache keyed by (seed, grid).
class FlowMap {
public:
    FlowMap(HVectorField field, FlowConfig config);

    const HorizontalCurve& trajectory(const HPoint& seed) const;
    const FlowConfig& config() const { return config_; }
    const HVectorField& field() const { return field_; }

private:
    HVectorField field_;
    FlowConfig config_;
    mutable std::mutex mu_;
    mutable std::map<std::string, std::shared_ptr<HorizontalCurve>> cache_;
};

/// u(t, x); group flow property u(s, u(t,x)) = u(s+t, x) for autonomous fields.
/// Negative t runs the reversed field.
HPoint flow_at(const HPoint& x, double t, const FlowMap& map);

/// Verifies S(gamma(t)) <= (S(0)+1) e^{Kt} - 1 with S = ||.||^4 at every sample.
struct GronwallReport {
    bool holds = true;
    double max_slack = 0;  // max over samples of S - bound (<= 0 when the bound holds)
    double worst_t = 0;
    double growth_constant = 0;
    double rate_constant = 0;
};
GronwallReport gronwall_certificate(const HorizontalCurve& curve, double c, double K);

}  // namespace heis
