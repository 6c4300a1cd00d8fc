#pragma once

#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "opuczeros/errors.hpp"
#include "opuczeros/intensity.hpp"
#include "opuczeros/opuc.hpp"
#include "opuczeros/randompoly.hpp"
#include "opuczeros/regions.hpp"
#include "opuczeros/weights.hpp"

namespace opuczeros {

/// Key-order-preserving JSON; keeps artifacts byte-stable across runs.
using Json = nlohmann::ordered_json;

/// Shortest decimal that round-trips the exact double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string method_name(IntensityMethod method) {
    switch (method) {
        case IntensityMethod::General: return "general";
        case IntensityMethod::ChristoffelDarboux: return "cd";
        case IntensityMethod::Auto: return "auto";
    }
    return "auto";
}

inline IntensityMethod method_from_name(const std::string& name) {
    if (name == "general") return IntensityMethod::General;
    if (name == "cd") return IntensityMethod::ChristoffelDarboux;
    if (name == "auto") return IntensityMethod::Auto;
    throw ConfigError("unknown intensity method '" + name + "' (want general|cd|auto)");
}

inline Json weight_to_json(const WeightSpec& spec) {
    Json j;
    switch (spec.family()) {
        case WeightFamily::Uniform:
            j["family"] = "uniform";
            break;
        case WeightFamily::BernsteinSzego:
            j["family"] = "bernstein_szego";
            j["a"] = spec.bernstein_parameter();
            break;
        case WeightFamily::TrigPoly:
            j["family"] = "trig_poly";
            j["coefficients"] = spec.trig_coefficients();
            break;
        case WeightFamily::Table:
            j["family"] = "table";
            j["theta_step"] = spec.table_step();
            j["values"] = spec.table_values();
            break;
    }
    return j;
}

inline WeightSpec weight_from_json(const Json& j) {
    try {
        const std::string family = j.at("family").get<std::string>();
        if (family == "uniform") return WeightSpec::uniform();
        if (family == "bernstein_szego") {
            return WeightSpec::bernstein_szego(j.at("a").get<double>());
        }
        if (family == "trig_poly") {
            return WeightSpec::trig_poly(j.at("coefficients").get<std::vector<double>>());
        }
        if (family == "table") {
            return WeightSpec::table(j.at("theta_step").get<double>(),
                                     j.at("values").get<std::vector<double>>());
        }
        throw ConfigError("unknown weight family '" + family + "'");
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("malformed weight spec: ") + e.what());
    } catch (const InvalidWeightError& e) {
        throw ConfigError(std::string("invalid weight spec: ") + e.what());
    }
}

inline Json region_to_json(const JordanRegion& region) {
    Json j;
    const auto center = Json::array({region.center().real(), region.center().imag()});
    switch (region.kind()) {
        case RegionKind::Disk:
            j["region"] = "disk";
            j["center"] = center;
            j["radius"] = region.radius();
            break;
        case RegionKind::Annulus:
            j["region"] = "annulus";
            j["center"] = center;
            j["r_inner"] = region.r_inner();
            j["r_outer"] = region.r_outer();
            break;
        case RegionKind::Rectangle:
            j["region"] = "rectangle";
            j["x_min"] = region.x_min();
            j["x_max"] = region.x_max();
            j["y_min"] = region.y_min();
            j["y_max"] = region.y_max();
            break;
        case RegionKind::AnnularSector:
            j["region"] = "annular_sector";
            j["center"] = center;
            j["r_inner"] = region.r_inner();
            j["r_outer"] = region.r_outer();
            j["theta_min"] = region.theta_min();
            j["theta_max"] = region.theta_max();
            break;
    }
    return j;
}

inline JordanRegion region_from_json(const Json& j) {
    try {
        const std::string kind = j.at("region").get<std::string>();
        std::complex<double> center{0.0, 0.0};
        if (j.contains("center")) {
            const auto c = j.at("center");
            center = {c.at(0).get<double>(), c.at(1).get<double>()};
        }
        if (kind == "disk") {
            return JordanRegion::disk(center, j.at("radius").get<double>());
        }
        if (kind == "annulus") {
            return JordanRegion::annulus(center, j.at("r_inner").get<double>(),
                                         j.at("r_outer").get<double>());
        }
        if (kind == "rectangle") {
            return JordanRegion::rectangle(j.at("x_min").get<double>(), j.at("x_max").get<double>(),
                                           j.at("y_min").get<double>(),
                                           j.at("y_max").get<double>());
        }
        if (kind == "annular_sector") {
            return JordanRegion::annular_sector(center, j.at("r_inner").get<double>(),
                                                j.at("r_outer").get<double>(),
                                                j.at("theta_min").get<double>(),
                                                j.at("theta_max").get<double>());
        }
        throw ConfigError("unknown region kind '" + kind + "'");
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("malformed region spec: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid region spec: ") + e.what());
    }
}

inline Json basis_to_json(const OpucBasis& basis) {
    Json j;
    j["N"] = basis.N;
    j["kappa"] = basis.kappa;
    j["alpha"] = basis.alpha;
    j["coeffs"] = basis.coeffs;
    return j;
}

/// Rebuilds a basis from its export, validating the triangular shape and the
/// positive leading coefficients. The moment sequence is not part of the
/// export and stays empty.
inline OpucBasis basis_from_json(const Json& j) {
    OpucBasis basis;
    try {
        basis.N = j.at("N").get<int>();
        basis.kappa = j.at("kappa").get<std::vector<double>>();
        basis.alpha = j.at("alpha").get<std::vector<double>>();
        basis.coeffs = j.at("coeffs").get<std::vector<std::vector<double>>>();
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("malformed basis export: ") + e.what());
    }
    const std::size_t rows = static_cast<std::size_t>(basis.N) + 1;
    if (basis.N < 0 || basis.coeffs.size() != rows || basis.kappa.size() != rows ||
        basis.alpha.size() != static_cast<std::size_t>(basis.N)) {
        throw ConfigError("basis export has inconsistent sizes");
    }
    for (std::size_t row = 0; row < rows; ++row) {
        if (basis.coeffs[row].size() != row + 1) {
            throw ConfigError("basis export row " + std::to_string(row) + " has wrong length");
        }
        if (!(basis.coeffs[row].back() > 0) || basis.coeffs[row].back() != basis.kappa[row]) {
            throw ConfigError("basis export leading coefficient disagrees with kappa");
        }
    }
    return basis;
}

inline Json report_to_json(const MonteCarloReport& report) {
    Json j;
    j["n"] = report.n;
    j["trials"] = report.trials;
    j["seed"] = report.seed;
    j["region"] = region_to_json(report.region);
    j["mean"] = report.mean;
    j["stderr"] = report.standard_error;
    j["degree_reduction_events"] = report.degree_reduction_events;
    if (report.quadrature_reference) {
        j["quadrature_ref"] = *report.quadrature_reference;
    } else {
        j["quadrature_ref"] = nullptr;
    }
    if (report.z_score && std::isfinite(*report.z_score)) {
        j["z_score"] = *report.z_score;
    } else {
        j["z_score"] = nullptr;
    }
    std::vector<long long> histogram(static_cast<std::size_t>(report.n) + 1, 0);
    for (int c : report.counts) {
        if (c >= 0 && c <= report.n) ++histogram[static_cast<std::size_t>(c)];
    }
    j["counts_histogram"] = histogram;
    return j;
}

/// CSV dump: one node per line, x fastest, doubles in shortest round-trip form.
inline void write_grid_csv(const IntensityGrid& grid, std::ostream& os) {
    os << "x,y,h,masked\n";
    for (int iy = 0; iy < grid.ny; ++iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            const std::size_t idx = static_cast<std::size_t>(iy) * grid.nx + ix;
            os << format_double(grid.x(ix)) << ',' << format_double(grid.y(iy)) << ','
               << format_double(grid.values[idx]) << ',' << int(grid.masked[idx]) << '\n';
        }
    }
}

inline Json grid_sidecar(const IntensityGrid& grid, const WeightSpec& weight) {
    Json j;
    j["weight"] = weight_to_json(weight);
    j["n"] = grid.n;
    j["method"] = method_name(grid.method);
    j["band_threshold"] = grid.band;
    return j;
}

}  // namespace opuczeros
