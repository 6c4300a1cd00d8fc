// Command line front end: builds bases, evaluates intensity grids, integrates
// expected zero counts, runs Monte Carlo validation, and self-checks.
//
// Usage:  opuczeros [command] --config run.json [overrides]
// The config is one JSON document whose "command" field selects the action;
// an explicit positional command takes precedence. Exit codes: 0 success,
// 2 configuration problem, 3 numerical failure.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opuczeros/errors.hpp"
#include "opuczeros/intensity.hpp"
#include "opuczeros/kernels.hpp"
#include "opuczeros/opuc.hpp"
#include "opuczeros/randompoly.hpp"
#include "opuczeros/regions.hpp"
#include "opuczeros/rng.hpp"
#include "opuczeros/serialize.hpp"
#include "opuczeros/weights.hpp"

namespace {

using opuczeros::Json;

struct RunConfig {
    std::string command;
    opuczeros::WeightSpec weight = opuczeros::WeightSpec::uniform();
    std::optional<int> basis_degree;  // N; defaults to the degree the command needs
    int n = 1;
    double moment_tol = 1e-12;
    double band_threshold = opuczeros::kNearCircleBand;
    opuczeros::IntensityMethod method = opuczeros::IntensityMethod::Auto;

    double x_min = -2.0, x_max = 2.0;
    double y_min = -2.0, y_max = 2.0;
    int nx = 41, ny = 41;

    std::optional<opuczeros::JordanRegion> region;
    int trials = 1000;
    std::uint64_t seed = 1;
    std::vector<int> n_list;
    std::vector<std::complex<double>> points;
    int resolution = 16;
    int resolution_cap = 2048;
    double integrate_tol = 1e-3;

    std::string out;
    std::string outdir;
};

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw opuczeros::ConfigError("cannot open config file '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::exception& e) {
        throw opuczeros::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    RunConfig cfg;
    try {
        if (j.contains("command")) cfg.command = j.at("command").get<std::string>();
        if (j.contains("weight")) cfg.weight = opuczeros::weight_from_json(j.at("weight"));
        if (j.contains("N")) cfg.basis_degree = j.at("N").get<int>();
        if (j.contains("n")) cfg.n = j.at("n").get<int>();
        if (j.contains("moment_tol")) cfg.moment_tol = j.at("moment_tol").get<double>();
        if (j.contains("band_threshold")) {
            cfg.band_threshold = j.at("band_threshold").get<double>();
        }
        if (j.contains("method")) {
            cfg.method = opuczeros::method_from_name(j.at("method").get<std::string>());
        }
        if (j.contains("x_min")) cfg.x_min = j.at("x_min").get<double>();
        if (j.contains("x_max")) cfg.x_max = j.at("x_max").get<double>();
        if (j.contains("y_min")) cfg.y_min = j.at("y_min").get<double>();
        if (j.contains("y_max")) cfg.y_max = j.at("y_max").get<double>();
        if (j.contains("nx")) cfg.nx = j.at("nx").get<int>();
        if (j.contains("ny")) cfg.ny = j.at("ny").get<int>();
        if (j.contains("region")) cfg.region = opuczeros::region_from_json(j.at("region"));
        if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("n_list")) cfg.n_list = j.at("n_list").get<std::vector<int>>();
        if (j.contains("points")) {
            for (const auto& p : j.at("points")) {
                cfg.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
            }
        }
        if (j.contains("resolution")) cfg.resolution = j.at("resolution").get<int>();
        if (j.contains("resolution_cap")) {
            cfg.resolution_cap = j.at("resolution_cap").get<int>();
        }
        if (j.contains("integrate_tol")) cfg.integrate_tol = j.at("integrate_tol").get<double>();
        if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
        if (j.contains("outdir")) cfg.outdir = j.at("outdir").get<std::string>();
    } catch (const Json::exception& e) {
        throw opuczeros::ConfigError(std::string("malformed config field: ") + e.what());
    }
    return cfg;
}

std::filesystem::path artifact_path(const RunConfig& cfg, const std::string& fallback) {
    std::filesystem::path dir = cfg.outdir;
    if (dir.empty()) {
        if (const char* env = std::getenv("OPUCZEROS_OUTDIR")) dir = env;
        if (dir.empty()) dir = ".";
    }
    std::filesystem::path file = cfg.out.empty() ? std::filesystem::path(fallback)
                                                 : std::filesystem::path(cfg.out);
    if (file.is_absolute()) return file;
    return dir / file;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw opuczeros::ConfigError("cannot write artifact '" + path.string() + "'");
    out << text;
    if (!out) throw opuczeros::ConfigError("write failed for artifact '" + path.string() + "'");
}

int resolved_degree(const RunConfig& cfg, int needed) {
    const int degree = cfg.basis_degree.value_or(needed);
    if (degree < needed) {
        throw opuczeros::ConfigError("N=" + std::to_string(degree) +
                                     " too small; this command needs N >= " +
                                     std::to_string(needed));
    }
    return degree;
}

/// Basis lookup with an on-disk cache keyed by (weight, N, moment tolerance).
opuczeros::OpucBasis get_basis(const RunConfig& cfg, int degree) {
    const std::string key = opuczeros::weight_to_json(cfg.weight).dump() +
                            "|N=" + std::to_string(degree) +
                            "|tol=" + opuczeros::format_double(cfg.moment_tol);
    std::filesystem::path dir = cfg.outdir;
    if (dir.empty()) {
        if (const char* env = std::getenv("OPUCZEROS_OUTDIR")) dir = env;
        if (dir.empty()) dir = ".";
    }
    const auto cache = dir / ("basis_cache_" + hex64(fnv1a64(key)) + ".json");
    if (std::filesystem::exists(cache)) {
        std::ifstream in(cache);
        Json j;
        try {
            j = Json::parse(in);
            return opuczeros::basis_from_json(j);
        } catch (...) {
            // Unreadable cache entry: fall through and rebuild it.
        }
    }
    const auto moments = opuczeros::compute_moments(cfg.weight, degree, cfg.moment_tol);
    auto basis = opuczeros::build_basis(moments, degree);
    write_text(cache, opuczeros::basis_to_json(basis).dump(2) + "\n");
    return basis;
}

Json base_provenance(const RunConfig& cfg, const std::string& command, int degree) {
    Json j;
    j["command"] = command;
    j["weight"] = opuczeros::weight_to_json(cfg.weight);
    j["N"] = degree;
    j["moment_tol"] = cfg.moment_tol;
    j["band_threshold"] = cfg.band_threshold;
    return j;
}

/// Largest |z| over the region; bounds how much limit-intensity mass can sit
/// beyond it (1/(R^2-1) for R > 1), reported so users can judge truncation.
double outer_radius(const opuczeros::JordanRegion& region) {
    using opuczeros::RegionKind;
    switch (region.kind()) {
        case RegionKind::Disk:
        case RegionKind::Annulus:
        case RegionKind::AnnularSector:
            return std::abs(region.center()) + region.r_outer();
        case RegionKind::Rectangle: {
            double r = 0.0;
            for (double x : {region.x_min(), region.x_max()}) {
                for (double y : {region.y_min(), region.y_max()}) {
                    r = std::max(r, std::abs(std::complex<double>(x, y)));
                }
            }
            return r;
        }
    }
    return 0.0;
}

int cmd_basis(const RunConfig& cfg) {
    const int degree = resolved_degree(cfg, std::max(cfg.n + 1, 1));
    const auto basis = get_basis(cfg, degree);
    Json j = opuczeros::basis_to_json(basis);
    j["config"] = base_provenance(cfg, "basis", degree);
    write_text(artifact_path(cfg, "basis.json"), j.dump(2) + "\n");
    return 0;
}

int cmd_grid(const RunConfig& cfg) {
    if (cfg.n < 0) throw opuczeros::ConfigError("grid needs n >= 0");
    const int degree = resolved_degree(cfg, cfg.n + 1);
    const auto basis = get_basis(cfg, degree);
    const auto grid =
        opuczeros::intensity_grid(basis, cfg.n, cfg.x_min, cfg.x_max, cfg.nx, cfg.y_min,
                                  cfg.y_max, cfg.ny, cfg.method, cfg.band_threshold);
    std::ostringstream csv;
    opuczeros::write_grid_csv(grid, csv);
    const auto csv_path = artifact_path(cfg, "grid.csv");
    write_text(csv_path, csv.str());

    Json side = opuczeros::grid_sidecar(grid, cfg.weight);
    Json provenance = base_provenance(cfg, "grid", degree);
    provenance["n"] = cfg.n;
    provenance["method"] = opuczeros::method_name(cfg.method);
    provenance["x_min"] = cfg.x_min;
    provenance["x_max"] = cfg.x_max;
    provenance["nx"] = cfg.nx;
    provenance["y_min"] = cfg.y_min;
    provenance["y_max"] = cfg.y_max;
    provenance["ny"] = cfg.ny;
    side["config"] = provenance;
    side["source_csv"] = csv_path.filename().string();
    write_text(csv_path.string() + ".json", side.dump(2) + "\n");
    return 0;
}

int cmd_expect(const RunConfig& cfg) {
    if (!cfg.region) throw opuczeros::ConfigError("expect needs a region");
    if (cfg.n < 0) throw opuczeros::ConfigError("expect needs n >= 0");
    const int degree = resolved_degree(cfg, cfg.n + 1);
    const auto basis = get_basis(cfg, degree);
    const auto result =
        opuczeros::integrate_intensity(basis, cfg.n, *cfg.region, cfg.resolution,
                                       cfg.integrate_tol, cfg.resolution_cap, cfg.band_threshold);
    Json j;
    Json provenance = base_provenance(cfg, "expect", degree);
    provenance["n"] = cfg.n;
    provenance["region"] = opuczeros::region_to_json(*cfg.region);
    provenance["resolution"] = cfg.resolution;
    provenance["resolution_cap"] = cfg.resolution_cap;
    provenance["integrate_tol"] = cfg.integrate_tol;
    j["config"] = provenance;
    j["expected_count"] = result.value;
    j["residual"] = result.residual;
    j["resolution"] = result.resolution;
    const double R = outer_radius(*cfg.region);
    if (R > 1.0) {
        j["limit_mass_outside_radius"] = 1.0 / (R * R - 1.0);
    } else {
        j["limit_mass_outside_radius"] = nullptr;
    }
    write_text(artifact_path(cfg, "expect.json"), j.dump(2) + "\n");
    return 0;
}

int cmd_mc(const RunConfig& cfg) {
    if (!cfg.region) throw opuczeros::ConfigError("mc needs a region");
    if (cfg.n < 1) throw opuczeros::ConfigError("mc needs n >= 1");
    if (cfg.trials < 100) throw opuczeros::ConfigError("mc needs trials >= 100");
    const int degree = resolved_degree(cfg, cfg.n + 1);
    const auto basis = get_basis(cfg, degree);
    const auto reference =
        opuczeros::integrate_intensity(basis, cfg.n, *cfg.region, cfg.resolution,
                                       cfg.integrate_tol, cfg.resolution_cap, cfg.band_threshold);
    const auto report = opuczeros::monte_carlo_expected_zeros(basis, cfg.n, *cfg.region,
                                                              cfg.trials, cfg.seed,
                                                              reference.value);
    Json j = opuczeros::report_to_json(report);
    Json provenance = base_provenance(cfg, "mc", degree);
    provenance["n"] = cfg.n;
    provenance["region"] = opuczeros::region_to_json(*cfg.region);
    provenance["trials"] = cfg.trials;
    provenance["seed"] = cfg.seed;
    provenance["resolution"] = cfg.resolution;
    provenance["integrate_tol"] = cfg.integrate_tol;
    j["config"] = provenance;
    write_text(artifact_path(cfg, "mc.json"), j.dump(2) + "\n");
    return 0;
}

int cmd_converge(const RunConfig& cfg) {
    if (cfg.points.empty()) throw opuczeros::ConfigError("converge needs a points list");
    if (cfg.n_list.empty()) throw opuczeros::ConfigError("converge needs an n_list");
    int max_n = 0;
    for (int n : cfg.n_list) {
        if (n < 0) throw opuczeros::ConfigError("converge n_list entries must be >= 0");
        max_n = std::max(max_n, n);
    }
    const int degree = resolved_degree(cfg, max_n + 1);
    const auto basis = get_basis(cfg, degree);

    std::ostringstream csv;
    csv << "x,y,n,h,limit,relative_deviation\n";
    for (const auto& z : cfg.points) {
        const double limit = opuczeros::limit_intensity(z);
        const auto profile =
            opuczeros::convergence_profile(basis, z, cfg.n_list, cfg.band_threshold);
        for (const auto& row : profile) {
            csv << opuczeros::format_double(z.real()) << ',' << opuczeros::format_double(z.imag())
                << ',' << row.n << ',' << opuczeros::format_double(row.h) << ','
                << opuczeros::format_double(limit) << ','
                << opuczeros::format_double(row.relative_deviation) << '\n';
        }
    }
    const auto csv_path = artifact_path(cfg, "converge.csv");
    write_text(csv_path, csv.str());

    Json provenance = base_provenance(cfg, "converge", degree);
    provenance["n_list"] = cfg.n_list;
    Json pts = Json::array();
    for (const auto& z : cfg.points) pts.push_back(Json::array({z.real(), z.imag()}));
    provenance["points"] = pts;
    Json side;
    side["config"] = provenance;
    side["source_csv"] = csv_path.filename().string();
    write_text(csv_path.string() + ".json", side.dump(2) + "\n");
    return 0;
}

int cmd_selftest() {
    namespace oz = opuczeros;
    int failures = 0;
    const auto check = [&failures](const std::string& name, const auto& body) {
        bool ok = false;
        std::string detail;
        try {
            ok = body();
        } catch (const std::exception& e) {
            detail = e.what();
        }
        std::cout << (ok ? "[ok]   " : "[FAIL] ") << name;
        if (!ok && !detail.empty()) std::cout << "  (" << detail << ")";
        std::cout << "\n";
        if (!ok) ++failures;
    };
    const double pi = std::numbers::pi;

    check("bernstein-szego moments match the geometric sequence", [&] {
        const auto m = oz::compute_moments(oz::WeightSpec::bernstein_szego(0.5), 6);
        for (int k = 0; k <= 6; ++k) {
            if (std::abs(m.c[k] - std::pow(0.5, k)) > 1e-12) return false;
        }
        return true;
    });
    check("verblunsky coefficients of bernstein-szego(0.5)", [&] {
        const auto basis =
            oz::build_basis(oz::compute_moments(oz::WeightSpec::bernstein_szego(0.5), 8), 8);
        if (std::abs(basis.alpha[0] - 0.5) > 1e-10) return false;
        for (std::size_t j = 1; j < basis.alpha.size(); ++j) {
            if (std::abs(basis.alpha[j]) > 1e-10) return false;
        }
        return true;
    });
    check("kernel closed form agrees with direct sums", [&] {
        const auto uw = oz::build_basis(oz::compute_moments(oz::WeightSpec::uniform(), 6), 6);
        const auto bw =
            oz::build_basis(oz::compute_moments(oz::WeightSpec::bernstein_szego(0.5), 6), 6);
        for (const auto* basis : {&uw, &bw}) {
            for (int i = 0; i < 40; ++i) {
                const double r = 0.05 + 0.9 * oz::rng::uniform_halfopen(
                                                  oz::rng::stream_word(42, 0, 2 * i));
                const double t =
                    oz::kTwoPi * oz::rng::uniform_halfopen(oz::rng::stream_word(42, 0, 2 * i + 1));
                const auto z = std::polar(r, t);
                for (int n : {1, 5}) {
                    const auto a = oz::kernel_direct(*basis, n, z);
                    const auto b = oz::kernel_cd(*basis, n, z);
                    const double scale = std::max(1.0, std::abs(a.k));
                    if (std::abs(a.k - b.k) > 1e-9 * scale) return false;
                    if (std::abs(a.k01 - b.k01) > 1e-9 * std::max(1.0, std::abs(a.k01)))
                        return false;
                    if (std::abs(a.k11 - b.k11) > 1e-9 * std::max(1.0, std::abs(a.k11)))
                        return false;
                }
            }
        }
        return true;
    });
    check("intensity anchors at the origin and z=0.5", [&] {
        const auto basis = oz::build_basis(oz::compute_moments(oz::WeightSpec::uniform(), 4), 4);
        if (std::abs(oz::intensity_general(basis, 1, {0.0, 0.0}) - 1.0 / pi) > 1e-12) return false;
        if (std::abs(oz::intensity_general(basis, 1, {0.5, 0.0}) - 0.64 / pi) > 1e-12) return false;
        return oz::intensity_general(basis, 0, {0.3, 0.2}) == 0.0;
    });
    check("limit intensity at z=2", [&] {
        return std::abs(oz::limit_intensity({2.0, 0.0}) - 1.0 / (9.0 * pi)) < 1e-15;
    });
    check("root finder solves z^2 - 1", [&] {
        auto roots = oz::find_roots({{-1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}});
        if (roots.size() != 2) return false;
        std::sort(roots.begin(), roots.end(),
                  [](auto a, auto b) { return a.real() < b.real(); });
        return std::abs(roots[0] - std::complex<double>(-1.0, 0.0)) < 1e-12 &&
               std::abs(roots[1] - std::complex<double>(1.0, 0.0)) < 1e-12;
    });
    check("coefficient sampling is reproducible", [&] {
        const auto a = oz::sample_coefficients(7, 3, 10);
        const auto b = oz::sample_coefficients(7, 3, 10);
        const auto c = oz::sample_coefficients(7, 4, 10);
        if (a.eta != b.eta) return false;
        return a.eta != c.eta;
    });
    check("region membership is strict", [&] {
        const auto disk = oz::JordanRegion::disk({0.0, 0.0}, 1.0);
        if (disk.contains({1.0, 0.0})) return false;
        if (!disk.contains({0.99, 0.0})) return false;
        const auto sector =
            oz::JordanRegion::annular_sector({0.0, 0.0}, 1.0, 2.0, 0.0, pi / 2.0);
        return sector.contains(std::polar(1.5, pi / 4.0));
    });
    check("unit-disk zero count for n=1 integrates to 1/2", [&] {
        const auto basis = oz::build_basis(oz::compute_moments(oz::WeightSpec::uniform(), 2), 2);
        const auto r =
            oz::integrate_intensity(basis, 1, oz::JordanRegion::disk({0.0, 0.0}, 1.0));
        return std::abs(r.value - 0.5) < 2e-3;
    });
    check("szego function squares back to the geometric mean", [&] {
        const auto spec = oz::WeightSpec::bernstein_szego(0.5);
        const auto d0 = oz::szego_function(spec, {0.0, 0.0});
        const double g = oz::geometric_mean(spec);
        return std::abs(d0.real() * d0.real() - g) < 1e-10 && std::abs(d0.imag()) < 1e-12;
    });

    std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zero intensity of random combinations of orthonormal polynomials "
                 "on the unit circle"};
    std::string command;
    std::string config_path;
    std::optional<int> opt_n, opt_degree, opt_trials, opt_nx, opt_ny, opt_resolution;
    std::optional<std::uint64_t> opt_seed;
    std::optional<double> opt_band, opt_moment_tol, opt_integrate_tol;
    std::optional<std::string> opt_method, opt_out, opt_outdir;

    app.add_option("command", command,
                   "basis | grid | expect | mc | converge | selftest (defaults to the config's "
                   "command field)");
    app.add_option("--config", config_path, "path to the JSON run configuration");
    app.add_option("--n", opt_n, "combination degree override");
    app.add_option("--N", opt_degree, "basis degree override");
    app.add_option("--trials", opt_trials, "Monte Carlo trial count override");
    app.add_option("--seed", opt_seed, "RNG seed override");
    app.add_option("--nx", opt_nx, "grid node count override (x)");
    app.add_option("--ny", opt_ny, "grid node count override (y)");
    app.add_option("--method", opt_method, "intensity method override: general | cd | auto");
    app.add_option("--band-threshold", opt_band, "near-circle exclusion band override");
    app.add_option("--moment-tol", opt_moment_tol, "moment quadrature tolerance override");
    app.add_option("--resolution", opt_resolution, "starting cells per axis override");
    app.add_option("--integrate-tol", opt_integrate_tol, "region quadrature tolerance override");
    app.add_option("--out", opt_out, "artifact path override");
    app.add_option("--outdir", opt_outdir, "output directory override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            cfg = load_config(config_path);
        } else if (command != "selftest") {
            throw opuczeros::ConfigError("--config is required for every command but selftest");
        }
        if (!command.empty()) cfg.command = command;
        if (opt_n) cfg.n = *opt_n;
        if (opt_degree) cfg.basis_degree = *opt_degree;
        if (opt_trials) cfg.trials = *opt_trials;
        if (opt_seed) cfg.seed = *opt_seed;
        if (opt_nx) cfg.nx = *opt_nx;
        if (opt_ny) cfg.ny = *opt_ny;
        if (opt_method) cfg.method = opuczeros::method_from_name(*opt_method);
        if (opt_band) cfg.band_threshold = *opt_band;
        if (opt_moment_tol) cfg.moment_tol = *opt_moment_tol;
        if (opt_resolution) cfg.resolution = *opt_resolution;
        if (opt_integrate_tol) cfg.integrate_tol = *opt_integrate_tol;
        if (opt_out) cfg.out = *opt_out;
        if (opt_outdir) cfg.outdir = *opt_outdir;

        if (cfg.command == "basis") return cmd_basis(cfg);
        if (cfg.command == "grid") return cmd_grid(cfg);
        if (cfg.command == "expect") return cmd_expect(cfg);
        if (cfg.command == "mc") return cmd_mc(cfg);
        if (cfg.command == "converge") return cmd_converge(cfg);
        if (cfg.command == "selftest") return cmd_selftest();
        throw opuczeros::ConfigError(cfg.command.empty()
                                         ? "no command given (positional or config field)"
                                         : "unknown command '" + cfg.command + "'");
    } catch (const opuczeros::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const opuczeros::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
