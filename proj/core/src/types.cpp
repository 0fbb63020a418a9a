#include "superosc/types.hpp"

#include <cmath>

namespace superosc {

double PhysicalConfig::lambda_min() const { return 2.0 * M_PI * hbar / p_max; }

void PhysicalConfig::validate() const {
    if (!(hbar > 0.0)) throw ValidationError("physical.hbar", "must be > 0");
    if (!(p_max > 0.0)) throw ValidationError("physical.p_max", "must be > 0");
    if (!(slit_half_width > 0.0))
        throw ValidationError("physical.slit_half_width", "must be > 0");
    if (!std::isfinite(slit_center))
        throw ValidationError("physical.slit_center", "must be finite");
}

const char* name_of(Family f) {
    switch (f) {
        case Family::PointAmplitude: return "point_amplitude";
        case Family::DerivativeAtPoint: return "derivative_at_point";
        case Family::IntervalArea: return "interval_area";
    }
    return "unknown";
}

Family family_from_name(const std::string& name) {
    if (name == "point_amplitude") return Family::PointAmplitude;
    if (name == "derivative_at_point") return Family::DerivativeAtPoint;
    if (name == "interval_area") return Family::IntervalArea;
    throw ValidationError("problem.family",
                          "unknown family '" + name +
                              "' (expected point_amplitude, derivative_at_point or interval_area)");
}

namespace {

void check_in_slit(const PhysicalConfig& cfg, double x, const std::string& field) {
    if (x < cfg.slit_lo() || x > cfg.slit_hi())
        throw ValidationError(field, "node " + std::to_string(x) + " lies outside the slit [" +
                                         std::to_string(cfg.slit_lo()) + ", " +
                                         std::to_string(cfg.slit_hi()) + "]");
}

void check_strictly_increasing(const std::vector<double>& v, const std::string& field) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        if (!(v[i] < v[i + 1]))
            throw ValidationError(field + "[" + std::to_string(i + 1) + "]",
                                  "nodes must be strictly increasing");
    }
}

}  // namespace

ConstraintSet ConstraintSet::point_amplitudes(const PhysicalConfig& cfg,
                                              std::vector<double> nodes,
                                              std::vector<std::complex<double>> values) {
    cfg.validate();
    if (values.empty()) throw ValidationError("problem.targets", "need at least one constraint");
    if (nodes.size() != values.size())
        throw ValidationError("problem.nodes", "node and target counts differ");
    check_strictly_increasing(nodes, "problem.nodes");
    for (double x : nodes) check_in_slit(cfg, x, "problem.nodes");
    return {Family::PointAmplitude, std::move(nodes), std::move(values)};
}

ConstraintSet ConstraintSet::derivatives_at(const PhysicalConfig& cfg, double anchor,
                                            std::vector<std::complex<double>> values) {
    cfg.validate();
    if (values.empty()) throw ValidationError("problem.targets", "need at least one constraint");
    check_in_slit(cfg, anchor, "problem.nodes");
    return {Family::DerivativeAtPoint, {anchor}, std::move(values)};
}

ConstraintSet ConstraintSet::interval_areas(const PhysicalConfig& cfg,
                                            std::vector<double> endpoints,
                                            std::vector<std::complex<double>> values) {
    cfg.validate();
    if (values.empty()) throw ValidationError("problem.targets", "need at least one constraint");
    if (endpoints.size() != values.size() + 1)
        throw ValidationError("problem.nodes", "interval areas need N+1 partition endpoints");
    check_strictly_increasing(endpoints, "problem.nodes");
    for (double x : endpoints) check_in_slit(cfg, x, "problem.nodes");
    return {Family::IntervalArea, std::move(endpoints), std::move(values)};
}

ConstraintSet appended(const PhysicalConfig& cfg, const ConstraintSet& cs, double param,
                       std::complex<double> value) {
    ConstraintSet ext = cs;
    switch (cs.family) {
        case Family::PointAmplitude:
            // a duplicated node is allowed here: the appended functional is
            // then linearly dependent and a later solve fails on the singular
            // Gram matrix
            check_in_slit(cfg, param, "extension.node");
            ext.nodes.push_back(param);
            break;
        case Family::DerivativeAtPoint:
            break;  // next derivative order is implied
        case Family::IntervalArea:
            check_in_slit(cfg, param, "extension.node");
            if (!(param > cs.nodes.back()))
                throw ValidationError("extension.node",
                                      "new endpoint must extend the partition to the right");
            ext.nodes.push_back(param);
            break;
    }
    ext.values.push_back(value);
    return ext;
}

}  // namespace superosc
