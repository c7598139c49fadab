#include "emrtm/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "emrtm/io.hpp"
#include "emrtm/mie.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace emrtm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

const std::vector<std::string> kAllChecks{"hk_exact", "hk_farfield", "energy_flux", "reciprocity", "theorem31"};

[[noreturn]] void fail(const std::string& where, const std::string& what)
{
    throw ConfigError(where + ": " + what);
}

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed)
{
    if (!j.is_object()) {
        fail(where, "expected an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
            fail(where, "unknown key '" + key + "'");
        }
    }
}

double number(const json& j, const std::string& where)
{
    if (!j.is_number()) {
        fail(where, "expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        fail(where, "must be finite");
    }
    return v;
}

double positive(const json& j, const std::string& where)
{
    const double v = number(j, where);
    if (!(v > 0.0)) {
        fail(where, "must be positive");
    }
    return v;
}

int count(const json& j, const std::string& where, int min = 1)
{
    if (!j.is_number_integer() || j.get<long long>() < min || j.get<long long>() > 1000000) {
        fail(where, "expected an integer >= " + std::to_string(min));
    }
    return j.get<int>();
}

Eigen::Vector2d pair(const json& j, const std::string& where)
{
    if (!j.is_array() || j.size() != 2) {
        fail(where, "expected a two-element array");
    }
    return Eigen::Vector2d(number(j[0], where + "[0]"), number(j[1], where + "[1]"));
}

std::string text(const json& j, const std::string& where)
{
    if (!j.is_string()) {
        fail(where, "expected a string");
    }
    return j.get<std::string>();
}

ParametricBoundary parse_shape(const json& j, const std::string& where)
{
    if (!j.is_object() || !j.contains("kind")) {
        fail(where, "needs a 'kind'");
    }
    const std::string kind = text(j["kind"], where + ".kind");
    const Point center = j.contains("center") ? pair(j["center"], where + ".center") : Point::Zero();
    if (kind == "circle") {
        only_keys(j, where, {"kind", "radius", "center"});
        if (!j.contains("radius")) {
            fail(where, "circle needs 'radius'");
        }
        return ParametricBoundary::circle(positive(j["radius"], where + ".radius"), center);
    }
    const double scale = j.contains("scale") ? positive(j["scale"], where + ".scale") : 1.0;
    if (kind == "kite") {
        only_keys(j, where, {"kind", "center", "scale"});
        return ParametricBoundary::kite(center, scale);
    }
    if (kind == "leaf") {
        only_keys(j, where, {"kind", "n", "center", "scale"});
        if (!j.contains("n")) {
            fail(where, "leaf needs 'n'");
        }
        return ParametricBoundary::leaf(count(j["n"], where + ".n"), center, scale);
    }
    fail(where + ".kind", "unknown shape '" + kind + "' (expected circle, kite or leaf)");
}

BoundaryCondition parse_bc(const json& j, const std::string& where)
{
    if (!j.is_object() || !j.contains("kind")) {
        fail(where, "needs a 'kind'");
    }
    const std::string kind = text(j["kind"], where + ".kind");
    try {
        if (kind == "pec") {
            only_keys(j, where, {"kind"});
            return BoundaryCondition::pec();
        }
        if (kind == "impedance") {
            only_keys(j, where, {"kind", "eta", "eta_upper", "eta_lower"});
            if (j.contains("eta")) {
                return BoundaryCondition::impedance(number(j["eta"], where + ".eta"));
            }
            if (!j.contains("eta_upper") || !j.contains("eta_lower")) {
                fail(where, "impedance needs 'eta' or both 'eta_upper' and 'eta_lower'");
            }
            return BoundaryCondition::impedance(number(j["eta_upper"], where + ".eta_upper"),
                                                number(j["eta_lower"], where + ".eta_lower"));
        }
        if (kind == "penetrable") {
            only_keys(j, where, {"kind", "index"});
            if (!j.contains("index")) {
                fail(where, "penetrable needs 'index'");
            }
            return BoundaryCondition::penetrable(number(j["index"], where + ".index"));
        }
    } catch (const std::invalid_argument& e) {
        fail(where, e.what());
    }
    fail(where + ".kind", "unknown boundary condition '" + kind + "' (expected pec, impedance or penetrable)");
}

Axis parse_axis(const std::string& s, const std::string& where)
{
    if (s == "x1") return Axis::X1;
    if (s == "x2") return Axis::X2;
    fail(where, "axis must be 'x1' or 'x2'");
}

std::string axis_name(Axis a)
{
    return a == Axis::X1 ? "x1" : "x2";
}

std::string offset_tag(double v)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << v;
    std::string s = os.str();
    std::replace(s.begin(), s.end(), '-', 'm');
    std::replace(s.begin(), s.end(), '.', 'p');
    return s;
}

bool single_penetrable_circle(const Scene& scene)
{
    return scene.size() == 1 && scene[0].boundary.kind() == ParametricBoundary::Kind::Circle
           && scene[0].bc.kind() == BoundaryCondition::Kind::Penetrable;
}

std::vector<std::string> requested_checks(const ExperimentConfig& cfg)
{
    if (!cfg.verify.checks.empty()) {
        return cfg.verify.checks;
    }
    std::vector<std::string> out{"hk_exact", "hk_farfield", "energy_flux", "reciprocity"};
    if (single_penetrable_circle(cfg.scene)) {
        out.push_back("theorem31");
    }
    return out;
}

void set_threads(const std::optional<int>& threads)
{
#ifdef _OPENMP
    if (threads) {
        omp_set_num_threads(std::max(1, *threads));
    }
#else
    (void)threads;
#endif
}

} // namespace

ExperimentConfig parse_config(const std::string& source, const RunOptions& overrides)
{
    json j;
    try {
        j = json::parse(source);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    only_keys(j, "config", {"name", "description", "scene", "wavelengths", "wavenumbers", "aperture", "grid",
                            "polarizations", "kernel", "noise", "solver", "points_per_wavelength", "output",
                            "cross_sections", "verify"});
    if (overrides.seed) {
        if (j.contains("noise")) {
            j["noise"]["seed"] = *overrides.seed;
        }
    }
    if (overrides.output) {
        j["output"] = overrides.output->string();
    }

    ExperimentConfig cfg;
    if (j.contains("name")) {
        cfg.name = text(j["name"], "name");
    }

    if (!j.contains("scene") || !j["scene"].is_array()) {
        fail("scene", "expected an array of scatterers (may be empty)");
    }
    for (std::size_t i = 0; i < j["scene"].size(); ++i) {
        const std::string where = "scene[" + std::to_string(i) + "]";
        const json& item = j["scene"][i];
        only_keys(item, where, {"shape", "bc"});
        if (!item.contains("shape") || !item.contains("bc")) {
            fail(where, "needs 'shape' and 'bc'");
        }
        cfg.scene.push_back({parse_shape(item["shape"], where + ".shape"), parse_bc(item["bc"], where + ".bc")});
    }

    if (j.contains("wavelengths") == j.contains("wavenumbers")) {
        fail("config", "give exactly one of 'wavelengths' or 'wavenumbers'");
    }
    const bool by_k = j.contains("wavenumbers");
    const json& waves = by_k ? j["wavenumbers"] : j["wavelengths"];
    const std::string wkey = by_k ? "wavenumbers" : "wavelengths";
    if (!waves.is_array() || waves.empty()) {
        fail(wkey, "expected a non-empty array");
    }
    for (std::size_t i = 0; i < waves.size(); ++i) {
        const double v = positive(waves[i], wkey + "[" + std::to_string(i) + "]");
        cfg.wavelengths.push_back(by_k ? 2.0 * std::numbers::pi / v : v);
    }
    if (std::set<double>(cfg.wavelengths.begin(), cfg.wavelengths.end()).size() != cfg.wavelengths.size()) {
        fail(wkey, "values must be distinct");
    }

    if (!j.contains("aperture")) {
        fail("aperture", "missing");
    }
    {
        const json& a = j["aperture"];
        only_keys(a, "aperture", {"sources", "source_radius", "receivers", "receiver_radius"});
        for (const char* key : {"sources", "source_radius", "receivers", "receiver_radius"}) {
            if (!a.contains(key)) {
                fail("aperture", std::string("missing '") + key + "'");
            }
        }
        cfg.aperture = Aperture(count(a["sources"], "aperture.sources"),
                                positive(a["source_radius"], "aperture.source_radius"),
                                count(a["receivers"], "aperture.receivers"),
                                positive(a["receiver_radius"], "aperture.receiver_radius"));
    }

    if (!j.contains("grid")) {
        fail("grid", "missing");
    }
    {
        const json& g = j["grid"];
        only_keys(g, "grid", {"min", "max", "nodes"});
        if (!g.contains("min") || !g.contains("max") || !g.contains("nodes")) {
            fail("grid", "needs 'min', 'max' and 'nodes'");
        }
        const Point lo = pair(g["min"], "grid.min");
        const Point hi = pair(g["max"], "grid.max");
        if (!g["nodes"].is_array() || g["nodes"].size() != 2) {
            fail("grid.nodes", "expected [nx, ny]");
        }
        try {
            cfg.grid = SamplingGrid(lo, hi, count(g["nodes"][0], "grid.nodes[0]"), count(g["nodes"][1], "grid.nodes[1]"));
            check_grid_inside(cfg.grid, cfg.aperture);
        } catch (const std::invalid_argument& e) {
            fail("grid", e.what());
        }
    }

    if (j.contains("polarizations")) {
        const json& p = j["polarizations"];
        if (!p.is_array() || p.empty()) {
            fail("polarizations", "expected a non-empty array of unit vectors");
        }
        cfg.polarizations.clear();
        for (std::size_t i = 0; i < p.size(); ++i) {
            const std::string where = "polarizations[" + std::to_string(i) + "]";
            const Eigen::Vector2d v = pair(p[i], where);
            if (std::abs(v.norm() - 1.0) > 1e-12) {
                fail(where, "must be a unit vector");
            }
            cfg.polarizations.push_back(v);
        }
    }

    try {
        if (j.contains("kernel")) {
            cfg.kernel = parse_kernel(text(j["kernel"], "kernel"));
        }
        if (j.contains("solver")) {
            cfg.solver = parse_solver(text(j["solver"], "solver"));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    if (j.contains("noise")) {
        const json& n = j["noise"];
        only_keys(n, "noise", {"level", "seed"});
        NoiseSettings ns;
        ns.level = n.contains("level") ? number(n["level"], "noise.level") : 0.0;
        if (ns.level < 0.0) {
            fail("noise.level", "must be non-negative");
        }
        if (n.contains("seed")) {
            if (!n["seed"].is_number_unsigned() && !(n["seed"].is_number_integer() && n["seed"].get<long long>() >= 0)) {
                fail("noise.seed", "expected a non-negative integer");
            }
            ns.seed = n["seed"].get<std::uint64_t>();
        }
        cfg.noise = ns;
    }

    if (j.contains("points_per_wavelength")) {
        cfg.points_per_wavelength = positive(j["points_per_wavelength"], "points_per_wavelength");
    }
    if (j.contains("output")) {
        cfg.output = text(j["output"], "output");
    }

    if (j.contains("cross_sections")) {
        const json& cs = j["cross_sections"];
        if (!cs.is_array()) {
            fail("cross_sections", "expected an array");
        }
        for (std::size_t i = 0; i < cs.size(); ++i) {
            const std::string where = "cross_sections[" + std::to_string(i) + "]";
            only_keys(cs[i], where, {"axis", "offset"});
            CrossSectionRequest req;
            req.axis = parse_axis(cs[i].contains("axis") ? text(cs[i]["axis"], where + ".axis") : "x1", where + ".axis");
            req.offset = cs[i].contains("offset") ? number(cs[i]["offset"], where + ".offset") : 0.0;
            const double lo = req.axis == Axis::X1 ? cfg.grid.lo().y() : cfg.grid.lo().x();
            const double hi = req.axis == Axis::X1 ? cfg.grid.hi().y() : cfg.grid.hi().x();
            if (req.offset < lo || req.offset > hi) {
                fail(where + ".offset", "outside the grid");
            }
            cfg.cross_sections.push_back(req);
        }
    }

    if (j.contains("verify")) {
        const json& v = j["verify"];
        only_keys(v, "verify", {"checks", "tolerance_override", "in_run"});
        if (v.contains("checks")) {
            if (!v["checks"].is_array()) {
                fail("verify.checks", "expected an array of names");
            }
            for (const auto& c : v["checks"]) {
                const std::string name = text(c, "verify.checks");
                if (std::find(kAllChecks.begin(), kAllChecks.end(), name) == kAllChecks.end()) {
                    fail("verify.checks", "unknown check '" + name + "'");
                }
                cfg.verify.checks.push_back(name);
            }
        }
        if (v.contains("tolerance_override") && !v["tolerance_override"].is_null()) {
            const double t = number(v["tolerance_override"], "verify.tolerance_override");
            if (t < 0.0) {
                fail("verify.tolerance_override", "must be non-negative");
            }
            cfg.verify.tolerance_override = t;
        }
        if (v.contains("in_run")) {
            if (!v["in_run"].is_boolean()) {
                fail("verify.in_run", "expected true or false");
            }
            cfg.verify.in_run = v["in_run"].get<bool>();
        }
    }
    for (const std::string& c : cfg.verify.checks) {
        if (c == "theorem31" && !single_penetrable_circle(cfg.scene)) {
            fail("verify.checks", "theorem31 needs a single penetrable circle");
        }
    }

    for (const Scatterer& sc : cfg.scene) {
        const double reach = sc.boundary.center().norm() + sc.boundary.circumradius();
        if (!(reach < std::min(cfg.aperture.source_radius(), cfg.aperture.receiver_radius()))) {
            fail("scene", "scatterer reaches the transducer rings");
        }
    }

    cfg.canonical = j.dump();
    return cfg;
}

ExperimentConfig load_config(const fs::path& path, const RunOptions& overrides)
{
    return parse_config(read_text(path), overrides);
}

std::string config_digest(const ExperimentConfig& cfg)
{
    return sha256_hex(cfg.canonical);
}

RunResult run_experiment(const ExperimentConfig& cfg, std::ostream& log)
{
    std::error_code ec;
    fs::create_directories(cfg.output, ec);
    if (ec || !fs::is_directory(cfg.output)) {
        throw IoError("cannot create output directory '" + cfg.output.string() + "'");
    }
    RunResult result;
    json artifacts = json::array();
    auto record = [&](const std::string& kind, const fs::path& file, const std::string& digest) {
        artifacts.push_back({{"kind", kind}, {"path", file.filename().string()}, {"sha256", digest}});
    };
    ForwardOptions fwd;
    fwd.solver = cfg.solver;
    fwd.points_per_wavelength = cfg.points_per_wavelength;
    ImagingOptions img_opt;
    img_opt.kernel = cfg.kernel;

    for (std::size_t i = 0; i < cfg.wavelengths.size(); ++i) {
        const WaveConfig wave = WaveConfig::from_wavelength(cfg.wavelengths[i]);
        log << "wavelength " << cfg.wavelengths[i] << ": forward solve\n";
        ScatterDataSet data = generate_dataset(cfg.scene, cfg.aperture, wave, cfg.polarizations, fwd);
        if (cfg.noise) {
            data = add_noise(data, cfg.noise->level, cfg.noise->seed + i);
        }
        const fs::path dpath = cfg.output / ("dataset_" + std::to_string(i) + ".bin");
        record("dataset", dpath, write_dataset(data, dpath));

        log << "wavelength " << cfg.wavelengths[i] << ": imaging " << cfg.grid.nx() << "x" << cfg.grid.ny() << "\n";
        ImageGrid img = image(data, cfg.grid, img_opt);
        const fs::path ipath = cfg.output / ("image_" + std::to_string(i) + ".bin");
        record("image", ipath, write_image(img, ipath));
        result.datasets.push_back(std::move(data));
        result.images.push_back(std::move(img));
    }

    if (cfg.wavelengths.size() > 1) {
        ImageGrid stack(cfg.grid);
        stack.provenance = result.images.front().provenance;
        stack.provenance.wavenumbers.clear();
        stack.provenance.dataset_digests.clear();
        for (const ImageGrid& img : result.images) {
            stack.values += img.values;
            stack.provenance.wavenumbers.push_back(img.provenance.wavenumbers.front());
            stack.provenance.dataset_digests.push_back(img.provenance.dataset_digests.front());
        }
        const fs::path spath = cfg.output / "image_stack.bin";
        record("image", spath, write_image(stack, spath));
        result.images.push_back(std::move(stack));
    }

    std::vector<CrossSectionRequest> sections = cfg.cross_sections;
    if (sections.empty() && cfg.grid.lo().y() <= 0.0 && cfg.grid.hi().y() >= 0.0) {
        sections.push_back({Axis::X1, 0.0});
    }
    for (const CrossSectionRequest& req : sections) {
        const Profile prof = cross_section(result.images.back(), req.axis, req.offset);
        const fs::path cpath = cfg.output / ("profile_" + axis_name(req.axis) + "_" + offset_tag(req.offset) + ".csv");
        record("profile", cpath, write_profile_csv(prof, cpath));
    }

    if (cfg.verify.in_run) {
        std::ostringstream sink;
        const auto reports = verify_suite(cfg, sink);
        record("reports", cfg.output / "reports.jsonl", sha256_hex(sink.str()));
        const auto failed = std::count_if(reports.begin(), reports.end(), [](const auto& r) { return !r.pass; });
        log << "identity checks: " << reports.size() - failed << " passed, " << failed << " failed\n";
    }

    json manifest;
    manifest["name"] = cfg.name;
    manifest["config_digest"] = config_digest(cfg);
    manifest["config"] = json::parse(cfg.canonical);
    manifest["software"] = {{"emrtm", kVersion},
                            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION)
                                          + "." + std::to_string(EIGEN_MINOR_VERSION)}};
    manifest["artifacts"] = artifacts;
    write_atomic(cfg.output / "manifest.json", manifest.dump(2) + "\n");
    log << "wrote " << artifacts.size() << " artifacts to " << cfg.output.string() << "\n";
    return result;
}

std::vector<IdentityReport> verify_suite(const ExperimentConfig& cfg, std::ostream& out)
{
    const WaveConfig wave = WaveConfig::from_wavelength(cfg.wavelengths.front());
    const std::optional<double> tol = cfg.verify.tolerance_override;
    std::vector<IdentityReport> reports;

    for (const std::string& check : requested_checks(cfg)) {
        if (check == "hk_exact") {
            const Point span = cfg.grid.hi() - cfg.grid.lo();
            const Point x = cfg.grid.lo() + 0.3 * span;
            const Point z = cfg.grid.lo() + Eigen::Vector2d(0.7 * span.x(), 0.45 * span.y());
            const double radius = std::max(5.0 * wave.lambda(), 1.5 * std::max(x.norm(), z.norm()));
            int nodes = std::max(512, int(std::ceil(4.0 * wave.k() * (x.norm() + z.norm()))) + 64);
            nodes += nodes % 2;
            reports.push_back(hk_exact(x, z, radius, wave, nodes, tol.value_or(1e-10)));
        } else if (check == "hk_farfield") {
            const std::vector<double> radii{100 * wave.lambda(), 200 * wave.lambda(), 400 * wave.lambda()};
            const double lo = tol ? 1.0 - *tol : 0.8;
            const double hi = tol ? 1.0 + *tol : std::numeric_limits<double>::infinity();
            reports.push_back(hk_farfield(Point(0.3, 0.2), Point(-0.4, 0.1), radii, wave, lo, hi));
        } else if (check == "energy_flux") {
            Scatterer circle{ParametricBoundary::circle(1.0), BoundaryCondition::pec()};
            for (const Scatterer& sc : cfg.scene) {
                if (sc.boundary.kind() == ParametricBoundary::Kind::Circle
                    && !(sc.bc.kind() == BoundaryCondition::Kind::Impedance && !sc.bc.constant_eta())) {
                    circle = sc;
                    break;
                }
            }
            const double rho = circle.boundary.radius();
            ModalCoefficients a;
            a.order = default_modal_order(wave.k() * rho);
            a.values = Eigen::VectorXcd::Zero(2 * a.order + 1);
            a[0] = 1.0;
            const ModalSolution sol = mie_solve(a, circle.bc, rho, wave, circle.boundary.center());
            reports.push_back(energy_flux(sol, rho + 100 * wave.lambda(), tol.value_or(1e-8)));
        } else if (check == "reciprocity") {
            const Aperture ring(cfg.aperture.receiver_count(), cfg.aperture.receiver_radius(),
                                cfg.aperture.receiver_count(), cfg.aperture.receiver_radius());
            ForwardOptions fwd;
            fwd.solver = cfg.solver;
            fwd.points_per_wavelength = cfg.points_per_wavelength;
            const ScatterDataSet data = generate_dataset(cfg.scene, ring, wave,
                                                         {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)}, fwd);
            reports.push_back(reciprocity_check(data, tol.value_or(1e-6)));
        } else if (check == "theorem31") {
            const Point center = 0.5 * (cfg.grid.lo() + cfg.grid.hi());
            const Point span = cfg.grid.hi() - cfg.grid.lo();
            const double radius = 0.5 * std::min(span.x(), span.y());
            reports.push_back(theorem31_consistency(cfg.scene.front(), spiral_points(50, center, radius), wave,
                                                    cfg.aperture, cfg.polarizations.front(),
                                                    tol ? 1.0 - *tol : 0.95));
        }
        out << to_json_line(reports.back()) << "\n";
    }

    std::string lines;
    for (const IdentityReport& r : reports) {
        lines += to_json_line(r) + "\n";
    }
    write_atomic(cfg.output / "reports.jsonl", lines);
    return reports;
}

namespace {

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn)
{
    try {
        return fn();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SolverError& e) {
        err << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        err << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
}

} // namespace

int run_command(const fs::path& config, const RunOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        set_threads(options.threads);
        const ExperimentConfig cfg = load_config(config, options);
        run_experiment(cfg, out);
        return int(kExitOk);
    });
}

int verify_command(const fs::path& config, const RunOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        set_threads(options.threads);
        const ExperimentConfig cfg = load_config(config, options);
        const auto reports = verify_suite(cfg, out);
        const bool ok = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
        return int(ok ? kExitOk : kExitIdentity);
    });
}

int info_command(const fs::path& artifact, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&]() -> int {
        fs::path bin = artifact;
        json side;
        if (artifact.extension() == ".json") {
            try {
                side = json::parse(read_text(artifact));
            } catch (const json::exception& e) {
                throw IoError("'" + artifact.string() + "' is not valid JSON: " + e.what());
            }
            if (side.contains("artifacts") && side.contains("config_digest")) {
                out << "manifest " << side.value("name", "") << "\n"
                    << "  config digest " << side["config_digest"].get<std::string>() << "\n";
                for (const auto& a : side["artifacts"]) {
                    out << "  " << a["kind"].get<std::string>() << " " << a["path"].get<std::string>() << " "
                        << a["sha256"].get<std::string>() << "\n";
                }
                return int(kExitOk);
            }
            bin.replace_extension(".bin");
        } else {
            side = json::parse(read_text(sidecar_path(bin)), nullptr, false);
            if (side.is_discarded()) {
                throw IoError("malformed sidecar for '" + bin.string() + "'");
            }
        }
        const std::string format = side.value("format", "");
        if (format == "emrtm-dataset") {
            const ScatterDataSet d = read_dataset(bin);
            out << "dataset " << bin.string() << "\n"
                << "  shape " << d.sources() << " x " << d.receivers() << " x " << d.polarization_count() << " x 2\n"
                << "  k " << d.wave.k() << " (lambda " << d.wave.lambda() << ")\n"
                << "  solver " << d.solver << ", scene " << d.scene_digest.substr(0, 16) << "\n"
                << "  noise " << (d.noise.applied ? "level " + std::to_string(d.noise.level) + " seed "
                                                        + std::to_string(d.noise.seed)
                                                  : std::string("none"))
                << "\n"
                << "  max |E^s| " << d.max_magnitude() << "\n"
                << "  checksum ok\n";
            return int(kExitOk);
        }
        if (format == "emrtm-image") {
            const ImageGrid img = read_image(bin);
            out << "image " << bin.string() << "\n"
                << "  grid " << img.grid.nx() << " x " << img.grid.ny() << " on [" << img.grid.lo().x() << ", "
                << img.grid.hi().x() << "] x [" << img.grid.lo().y() << ", " << img.grid.hi().y() << "]\n"
                << "  kernel " << img.provenance.variant << ", wavenumbers " << img.provenance.wavenumbers.size()
                << ", polarizations " << img.provenance.polarizations.size() << "\n"
                << "  range [" << img.values.minCoeff() << ", " << img.values.maxCoeff() << "]\n"
                << "  checksum ok\n";
            return int(kExitOk);
        }
        throw IoError("'" + artifact.string() + "' is not an emrtm artifact");
    });
}

} // namespace emrtm
