#include "spherequad/cli.hpp"

#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "format.hpp"
#include "spherequad/errors.hpp"
#include "spherequad/oracle.hpp"
#include "spherequad/rectangle.hpp"
#include "spherequad/sphere_assembly.hpp"
#include "spherequad/square_checks.hpp"
#include "spherequad/square_optimizer.hpp"

namespace spherequad::cli {

namespace {

using Json = nlohmann::ordered_json;

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw OutputError("cannot open " + path + " for writing");
    f << content;
    f.close();
    if (!f)
        throw OutputError("failed writing " + path);
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// The timestamp lives here rather than in the outputs so that repeated runs
// produce byte-identical result files.
void write_manifest(const std::string& primary, const std::string& command, const Json& parameters,
                    const Json& tolerances, const std::vector<std::string>& outputs) {
    Json m;
    m["schema"] = 1;
    m["command"] = command;
    m["parameters"] = parameters;
    m["version"] = SPHEREQUAD_VERSION;
    m["timestamp"] = utc_timestamp();
    m["tolerances"] = tolerances;
    m["outputs"] = outputs;
    write_file(primary + ".manifest.json", m.dump(2) + "\n");
}

Json header(const std::string& command, const Json& parameters) {
    Json j;
    j["schema"] = 1;
    j["command"] = command;
    j["parameters"] = parameters;
    return j;
}

Json diagnostic(const std::string& command, const Json& parameters, const std::string& type,
                const std::string& message, const std::vector<std::string>& trace = {}) {
    Json j = header(command, parameters);
    j["error"] = {{"type", type}, {"message", message}, {"trace", trace}};
    return j;
}

// ---------------------------------------------------------------- optimize

struct OptimizeArgs {
    double a = 0.0;
    std::string error = "radial";
    double tol = kDefaultTolerance;
    std::string json;
};

int cmd_optimize(const OptimizeArgs& o, std::ostream& out, std::ostream& err) {
    const Json params = {{"a", o.a}, {"error", o.error}, {"tol", o.tol}};
    auto fail = [&](const std::string& type, const std::string& message, const std::vector<std::string>& trace) {
        err << "optimize: " << type << ": " << message << "\n";
        if (!o.json.empty())
            write_file(o.json, diagnostic("optimize", params, type, message, trace).dump(2) + "\n");
        return kExitError;
    };
    OptimizationResult r;
    try {
        if (!(o.tol > 0.0))
            throw ParameterError("--tol must be positive");
        r = optimize_square(o.a, parse_error_kind(o.error), o.tol);
    } catch (const ParameterError& e) {
        return fail("parameter_error", e.what(), {});
    } catch (const SolverError& e) {
        return fail("solver_error", e.what(), e.trace());
    }

    Json j = header("optimize", params);
    j["result"] = {{"alpha", r.params.alpha},
                   {"beta", r.params.beta},
                   {"u_m", r.u_m},
                   {"max_error", r.max_error},
                   {"residual", r.residual},
                   {"iterations", r.iterations},
                   {"condition_estimate", r.condition_estimate},
                   {"warnings", r.warnings}};
    if (o.json.empty()) {
        out << j.dump(2) << "\n";
    } else {
        write_file(o.json, j.dump(2) + "\n");
        write_manifest(o.json, "optimize", params, {{"newton", o.tol}}, {o.json});
        out << "alpha* = " << full(r.params.alpha) << "  beta* = " << full(r.params.beta)
            << "  E = " << sci6(r.max_error) << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------- table

struct TableArgs {
    int levels = 7;
    std::string error = "radial";
    std::string csv;
};

int cmd_table(const TableArgs& o, std::ostream& out, std::ostream& err) {
    if (o.levels < 2)
        throw ParameterError("--levels must be at least 2");
    const ErrorKind kind = parse_error_kind(o.error);

    std::string csv = csv_row({"a", "alpha", "beta", "error", "rate", "status"});
    double prev_a = 0.0, prev_e = 0.0;
    bool prev_ok = false, all_ok = true;
    for (int i = 0; i < o.levels; ++i) {
        const double a = std::ldexp(kMaxSquareHalfSide, -i);
        try {
            const OptimizationResult r = optimize_square(a, kind);
            std::string rate;
            if (prev_ok)
                rate = fixed4(std::log(prev_e / r.max_error) / std::log(prev_a / a));
            csv += csv_row({full(a), fixed4(r.params.alpha), fixed4(r.params.beta), sci6(r.max_error), rate, "ok"});
            prev_e = r.max_error;
            prev_ok = true;
        } catch (const SolverError& e) {
            err << "table: row " << i << " (a = " << full(a) << "): " << e.what() << "\n";
            csv += csv_row({full(a), "", "", "", "", "solver_error"});
            prev_ok = false;
            all_ok = false;
        }
        prev_a = a;
    }

    if (o.csv.empty()) {
        out << csv;
    } else {
        write_file(o.csv, csv);
        write_manifest(o.csv, "table", {{"levels", o.levels}, {"error", o.error}},
                       {{"newton", kDefaultTolerance}}, {o.csv});
    }
    return all_ok ? kExitOk : kExitError;
}

// ---------------------------------------------------------------- mesh

struct MeshArgs {
    std::string spline;
    int samples = 20;
    std::string obj;
};

int cmd_mesh(const MeshArgs& o, std::ostream& out, std::ostream&) {
    if (o.samples < 2)
        throw ParameterError("--samples must be at least 2");
    const SphereSpline s = o.spline == "g1"    ? assemble_g1()
                           : o.spline == "two" ? assemble_g0(2, ErrorKind::Radial)
                                               : assemble_g0(6, ErrorKind::Radial);
    const int n = o.samples;
    const int side = n + 1;

    std::ostringstream obj;
    std::string csv = csv_row({"vertex", "patch", "u", "v", "radial_error"});
    obj << "# spherequad " << SPHEREQUAD_VERSION << " mesh: spline " << o.spline << ", "
        << s.patches.size() << " patches, " << side * side << " vertices each\n";
    long vertex = 0;
    double worst = 0.0;
    for (std::size_t k = 0; k < s.patches.size(); ++k) {
        const ControlNet net = s.patches[k].world_net();
        const long offset = vertex;
        obj << "g patch" << k << "\n";
        for (int j = 0; j < side; ++j)
            for (int i = 0; i < side; ++i) {
                const double u = i == n ? 1.0 : -1.0 + 2.0 * i / n;
                const double v = j == n ? 1.0 : -1.0 + 2.0 * j / n;
                const Vec3 p = eval_patch(net, u, v);
                const double g = error_of_point(p, ErrorKind::Radial);
                worst = std::max(worst, std::abs(g));
                obj << "v " << full(p.x) << " " << full(p.y) << " " << full(p.z) << "\n";
                csv += csv_row({std::to_string(++vertex), std::to_string(k), fixed4(u), fixed4(v), sci6(g)});
            }
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const long v00 = offset + j * side + i + 1;
                obj << "f " << v00 << " " << v00 + 1 << " " << v00 + side + 1 << " " << v00 + side << "\n";
            }
    }

    const std::string csv_path = std::filesystem::path(o.obj).replace_extension(".error.csv").string();
    write_file(o.obj, obj.str());
    write_file(csv_path, csv);
    write_manifest(o.obj, "mesh", {{"spline", o.spline}, {"samples", n}}, {{"newton", kDefaultTolerance}},
                   {o.obj, csv_path});
    out << "wrote " << s.patches.size() << " groups, " << vertex << " vertices; max |g| at vertices "
        << sci6(worst) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- rect

struct RectArgs {
    double a = 0.0;
    double b = 0.0;
    bool region = false;
    std::string csv;
    std::string error = "radial";
};

int cmd_rect(const RectArgs& o, std::ostream& out, std::ostream&) {
    validate_rect_sides(o.a, o.b);
    const ErrorKind kind = parse_error_kind(o.error);
    const RectBoundarySolve bnd = solve_alpha1(o.a, o.b, kind);
    const auto threshold = solve_threshold(o.a, kind);
    const std::string b_a = threshold ? full(threshold->b) : "";

    auto row = [&](const std::string& record, const std::string& alpha2, const std::string& beta,
                   const std::string& max_abs, const std::array<std::string, 3>& k) {
        return csv_row({record, full(o.a), full(o.b), b_a, fixed4(bnd.alpha1), fixed4(bnd.u0), alpha2, beta,
                        max_abs, k[0], k[1], k[2]});
    };
    std::string csv = csv_row({"record", "a", "b", "b_threshold", "alpha1", "u0", "alpha2", "beta",
                               "max_abs_error", "normal_slope", "center_gap", "short_edge_gap"});
    csv += row("boundary", "", "", sci6(bnd.boundary_error), {sci6(bnd.residual), "", ""});
    if (threshold)
        csv += row("threshold", fixed4(threshold->alpha2), fixed4(threshold->beta), "",
                   {sci6(threshold->residuals[0]), sci6(threshold->residuals[1]), sci6(threshold->residuals[2])});

    out << "alpha1 = " << full(bnd.alpha1) << "  u0 = " << full(bnd.u0) << "  boundary error = "
        << sci6(bnd.boundary_error) << "\n";
    out << "threshold b_a = " << (threshold ? full(threshold->b) : std::string("none")) << "\n";

    if (o.region) {
        const RectRegion r = region_vertices(o.a, o.b, kind);
        if (r.degenerate) {
            csv += row("empty", "", "", "", {"", "", ""});
            out << "no multi-optimum region: " << r.reason << "\n";
        } else {
            const std::array<RegionVertex, 4> pts{r.vertices[0], r.vertices[1], r.vertices[2], r.centroid()};
            const std::array<const char*, 4> names{"v1", "v2", "v3", "centroid"};
            double lo = INFINITY, hi = 0.0;
            for (std::size_t k = 0; k < pts.size(); ++k) {
                const double m = rect_extrema(r.params(pts[k]), kind).max_abs();
                const RectConstraints c = rect_constraints(r.params(pts[k]), bnd.u0, kind);
                lo = std::min(lo, m);
                hi = std::max(hi, m);
                csv += row(names[k], fixed4(pts[k].alpha2), fixed4(pts[k].beta), sci6(m),
                           {sci6(c.normal_slope), sci6(c.center_gap), sci6(c.short_edge_gap)});
                out << names[k] << ": (alpha2, beta) = (" << fixed4(pts[k].alpha2) << ", " << fixed4(pts[k].beta)
                    << ")  max|error| = " << sci6(m) << "\n";
            }
            out << "spread of max|error| over vertices and centroid: " << sci6(hi - lo) << "\n";
        }
    }

    if (o.csv.empty()) {
        out << csv;
    } else {
        write_file(o.csv, csv);
        write_manifest(o.csv, "rect", {{"a", o.a}, {"b", o.b}, {"region", o.region}, {"error", o.error}}, {},
                       {o.csv});
    }
    return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    double a = 0.0;
    int grid = 1001;
    std::string json;
};

Json check_json(const CheckOutcome& c) {
    return {{"name", c.name}, {"passed", c.passed}, {"worst", c.worst}, {"threshold", c.threshold},
            {"detail", c.detail}};
}

int cmd_verify(const VerifyArgs& o, std::ostream& out, std::ostream&) {
    if (o.grid < 101 || o.grid % 2 == 0)
        throw ParameterError("--grid must be odd and at least 101");
    validate_square_half_side(o.a);

    std::vector<CheckOutcome> checks;
    for (ErrorKind kind : {ErrorKind::Simplified, ErrorKind::Radial}) {
        const ExtremaReport rep = verify_extrema_on_angle(optimize_square(o.a, kind), o.grid);
        std::ostringstream d;
        d.precision(17);
        d << "grid max " << rep.grid_max << " vs angle " << rep.angle_max << ", grid min " << rep.grid_min
          << " vs angle " << rep.angle_min;
        checks.push_back({"extrema_on_angle_" + std::string(to_string(kind)), rep.pass,
                          std::max(rep.grid_max - rep.angle_max, rep.angle_min - rep.grid_min), rep.slack, d.str()});
    }
    for (CheckOutcome& c : lemma_property_suite(o.a))
        checks.push_back(std::move(c));

    {
        const OptimizationResult opt = optimize_square(o.a, ErrorKind::Simplified);
        const SideEquioscillation cmp = equioscillating_side_alpha(o.a, ErrorKind::Simplified);
        const double margin = cmp.angle_minimax - opt.max_error;
        checks.push_back({"comparator_not_better", margin >= 0.0, margin, 0.0,
                          "comparator " + sci6(cmp.angle_minimax) + " vs optimum " + sci6(opt.max_error)});
    }
    {
        const OptimizationResult opt = optimize_square(o.a, ErrorKind::Radial);
        const auto orc = grid_minimax_square(o.a, ErrorKind::Radial);
        const double gap = std::abs(opt.max_error - orc.best_minimax);
        const double confirm = orc.full_square_minimax - orc.best_minimax;
        checks.push_back({"oracle_radial", gap <= orc.slack && confirm <= orc.slack, gap, orc.slack,
                          "newton " + sci6(opt.max_error) + ", oracle " + sci6(orc.best_minimax) +
                              ", full-grid excess " + sci6(confirm)});
    }

    bool passed = true;
    Json list = Json::array();
    for (const CheckOutcome& c : checks) {
        passed = passed && c.passed;
        list.push_back(check_json(c));
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    }
    const Json params = {{"a", o.a}, {"grid", o.grid}};
    Json j = header("verify", params);
    j["checks"] = list;
    j["passed"] = passed;
    if (!o.json.empty()) {
        write_file(o.json, j.dump(2) + "\n");
        write_manifest(o.json, "verify", params, {{"newton", kDefaultTolerance}, {"extrema_slack", 1e-9}},
                       {o.json});
    }
    return passed ? kExitOk : kExitCheckFailed;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Biquadratic Bezier approximation of spherical squares, rectangles and spheres", "spherequad"};
    app.set_version_flag("--version", SPHEREQUAD_VERSION);
    app.require_subcommand(1);
    const std::vector<std::string> kinds{"radial", "simplified"};

    OptimizeArgs oa;
    auto* optimize = app.add_subcommand("optimize", "Optimal patch for a spherical square");
    optimize->add_option("--a", oa.a, "Half-side of the projected square")->required();
    optimize->add_option("--error", oa.error, "Error measure")->check(CLI::IsMember(kinds));
    optimize->add_option("--tol", oa.tol, "Newton residual tolerance");
    optimize->add_option("--json", oa.json, "Write the result as JSON to this path");

    TableArgs ta;
    auto* table = app.add_subcommand("table", "Optimal errors for a = a_max / 2^i and their rates");
    table->add_option("--levels", ta.levels, "Number of rows");
    table->add_option("--error", ta.error, "Error measure")->check(CLI::IsMember(kinds));
    table->add_option("--csv", ta.csv, "Write CSV to this path");

    MeshArgs ma;
    auto* mesh = app.add_subcommand("mesh", "Sample a whole-sphere spline into an OBJ mesh");
    mesh->add_option("--spline", ma.spline, "two, six or g1")->required()->check(CLI::IsMember({"two", "six", "g1"}));
    mesh->add_option("--samples", ma.samples, "Intervals per patch edge");
    mesh->add_option("--obj", ma.obj, "Output mesh path")->required();

    RectArgs ra;
    auto* rect = app.add_subcommand("rect", "Spherical rectangle: long-edge solve, threshold and region");
    rect->add_option("--a", ra.a, "Long half-edge")->required();
    rect->add_option("--b", ra.b, "Short half-edge")->required();
    rect->add_flag("--region", ra.region, "Compute the triangle of candidate optima");
    rect->add_option("--csv", ra.csv, "Write CSV to this path");
    rect->add_option("--error", ra.error, "Error measure")->check(CLI::IsMember(kinds));

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run the verification checks at one half-side");
    verify->add_option("--a", va.a, "Half-side of the projected square")->required();
    verify->add_option("--grid", va.grid, "Odd grid size for the full-square scan");
    verify->add_option("--json", va.json, "Write the report as JSON to this path");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
    }

    try {
        if (optimize->parsed())
            return cmd_optimize(oa, out, err);
        if (table->parsed())
            return cmd_table(ta, out, err);
        if (mesh->parsed())
            return cmd_mesh(ma, out, err);
        if (rect->parsed())
            return cmd_rect(ra, out, err);
        return cmd_verify(va, out, err);
    } catch (const ParameterError& e) {
        err << "parameter error: " << e.what() << "\n";
    } catch (const SolverError& e) {
        err << "solver error: " << e.what() << "\n";
        for (const std::string& line : e.trace())
            err << "  " << line << "\n";
    } catch (const OutputError& e) {
        err << "output error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return kExitError;
}

} // namespace spherequad::cli
