#include "mfsim/vehicle.hpp"

#include <cmath>
#include <sstream>

#include "mfsim/errors.hpp"
#include "mfsim/geometry.hpp"

namespace mfsim {

void validate(const VehicleParams& p) {
    const struct {
        const char* name;
        double value;
    } positives[] = {
        {"wheelbase", p.wheelbase},        {"length", p.length},
        {"width", p.width},                {"mass", p.mass},
        {"delta_max", p.delta_max},        {"steer_rate_max", p.steer_rate_max},
        {"a_accel_max", p.a_accel_max},    {"a_brake_max", p.a_brake_max},
        {"v_max", p.v_max},                {"tau_steer", p.tau_steer},
        {"tau_accel", p.tau_accel},        {"mu", p.mu},
    };
    for (const auto& f : positives) {
        if (!(f.value > 0.0) || !std::isfinite(f.value))
            throw ValidationError(std::string("VehicleParams.") + f.name + " must be > 0");
    }
    if (!(p.delta_max < kPi / 2.0))
        throw ValidationError("VehicleParams.delta_max must be < pi/2");
}

namespace {

VehicleCatalog make_builtin() {
    VehicleCatalog catalog;
    VehicleParams touring;
    touring.model_id = "touring";
    touring.wheelbase = 2.7;
    touring.length = 4.6;
    touring.width = 1.8;
    touring.mass = 1475.0;
    touring.delta_max = 0.61;
    touring.steer_rate_max = 6.98;
    touring.a_accel_max = 8.0;
    touring.a_brake_max = 10.0;
    touring.v_max = 50.8;
    touring.tau_steer = 0.08;
    touring.tau_accel = 0.25;
    touring.mu = 1.0;
    catalog.set(touring);

    VehicleParams offroad;
    offroad.model_id = "offroad";
    offroad.wheelbase = 2.9;
    offroad.length = 4.8;
    offroad.width = 1.9;
    offroad.mass = 2100.0;
    offroad.delta_max = 0.55;
    offroad.steer_rate_max = 5.0;
    offroad.a_accel_max = 7.5;
    offroad.a_brake_max = 9.0;
    offroad.v_max = 40.0;
    offroad.tau_steer = 0.15;
    offroad.tau_accel = 0.40;
    offroad.mu = 0.9;
    catalog.set(offroad);

    VehicleParams citycar;
    citycar.model_id = "citycar";
    citycar.wheelbase = 2.0;
    citycar.length = 3.2;
    citycar.width = 1.6;
    citycar.mass = 950.0;
    citycar.delta_max = 0.70;
    citycar.steer_rate_max = 4.5;
    citycar.a_accel_max = 3.5;
    citycar.a_brake_max = 8.5;
    citycar.v_max = 35.0;
    citycar.tau_steer = 0.20;
    citycar.tau_accel = 0.30;
    citycar.mu = 0.85;
    catalog.set(citycar);
    return catalog;
}

}  // namespace

const VehicleCatalog& VehicleCatalog::builtin() {
    static const VehicleCatalog catalog = make_builtin();
    return catalog;
}

const VehicleParams& VehicleCatalog::lookup(const std::string& model_id) const {
    auto it = entries_.find(model_id);
    if (it == entries_.end()) {
        std::ostringstream msg;
        msg << "unknown vehicle model '" << model_id << "'; valid ids:";
        for (const auto& [id, _] : entries_) msg << " " << id;
        throw CatalogError(msg.str());
    }
    return it->second;
}

std::vector<std::string> VehicleCatalog::ids() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [id, _] : entries_) out.push_back(id);
    return out;
}

const VehicleParams& vehicle_catalog(const std::string& model_id) {
    return VehicleCatalog::builtin().lookup(model_id);
}

}  // namespace mfsim
