// Command-line front end. Exit codes: 0 ok, 1 verification failure, 2 usage or
// configuration error, 3 numerical error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wrinkle/acceptance.hpp"
#include "wrinkle/airy.hpp"
#include "wrinkle/characteristics.hpp"
#include "wrinkle/energy.hpp"
#include "wrinkle/error.hpp"
#include "wrinkle/herringbone.hpp"
#include "wrinkle/render.hpp"
#include "wrinkle/stablelines.hpp"

using json = nlohmann::ordered_json;
using namespace wrinkle;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    // domain
    std::string shape = "ellipse";
    double a = 2.0, b = 1.0;
    std::vector<double> center{0.0, 0.0};
    double orientation = pi / 2;
    std::string vertices;
    // shell
    std::string sign = "positive";
    double K = 1.0;
    std::string curvature_csv;
    // discretisation and output
    int resolution = 256;
    double spacing = 0.0;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::string u_kind = "parallel";
    double u_angle = 0.0;
    double tolerance = 1e-9;
    // energy parameters
    double bend = 1e-6, stiffness = 1.0, gamma = 0.0;
    std::vector<double> auto_bk;
    double l_wr = 0, l_sh = 0, l_avg = 0, delta_int = 0, delta_ext = 0;
    std::string mu = "defect";
    double h_factor = 16.0;
    bool allow_outside_regime = false;
    std::string field;
    std::string reference = "target";
    bool write_field = false;
    // sweep
    std::vector<double> b_list{1e-6, 1e-8, 1e-10};
    // verify
    std::string only;
    bool no_diagnostics = false;
};

json echo(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["shape"] = c.shape;
    j["a"] = c.a;
    j["b"] = c.b;
    j["center"] = c.center;
    j["orientation"] = c.orientation;
    if (!c.vertices.empty()) j["vertices"] = c.vertices;
    j["sign"] = c.sign;
    j["K"] = c.K;
    if (!c.curvature_csv.empty()) j["curvature-csv"] = c.curvature_csv;
    j["resolution"] = c.resolution;
    j["spacing"] = c.spacing;
    j["out-dir"] = c.out_dir;
    if (c.seed) j["seed"] = *c.seed;
    j["u-kind"] = c.u_kind;
    j["u-angle"] = c.u_angle;
    j["tolerance"] = c.tolerance;
    if (c.command == "herringbone" || c.command == "energy" || c.command == "sweep") {
        j["bend"] = c.bend;
        j["stiffness"] = c.stiffness;
        j["gamma"] = c.gamma;
        if (!c.auto_bk.empty()) j["auto"] = c.auto_bk;
        j["mu"] = c.mu;
        j["h-factor"] = c.h_factor;
        j["allow-outside-regime"] = c.allow_outside_regime;
    }
    if (c.command == "energy") {
        if (!c.field.empty()) j["field"] = c.field;
        j["reference"] = c.reference;
    }
    if (c.command == "herringbone") j["write-field"] = c.write_field;
    if (c.command == "sweep") j["b-list"] = c.b_list;
    if (c.command == "verify") {
        j["only"] = c.only;
        j["no-diagnostics"] = c.no_diagnostics;
    }
    return j;
}

std::vector<Point2> parse_vertices(const std::string& s) {
    std::vector<Point2> pts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';')) {
        double x, y;
        if (std::sscanf(item.c_str(), " %lf , %lf", &x, &y) != 2) throw UsageError("bad vertex '" + item + "'");
        pts.push_back({x, y});
    }
    if (pts.size() < 3) throw UsageError("a polygon needs at least three vertices (x,y;x,y;...)");
    return pts;
}

Domain make_domain(const RunConfig& c) {
    if (c.center.size() != 2) throw UsageError("--center takes two numbers");
    const Point2 ctr{c.center[0], c.center[1]};
    if (c.shape == "disc") return Domain::disc(c.a, ctr);
    if (c.shape == "ellipse") return Domain::ellipse(c.a, c.b, ctr);
    if (c.shape == "half-disc") return Domain::half_disc(c.a, ctr, c.orientation);
    if (c.shape == "rectangle") return Domain::rectangle(c.a, c.b, ctr);
    if (c.shape == "polygon") return Domain::convex_polygon(parse_vertices(c.vertices));
    throw UsageError("unknown shape '" + c.shape + "'");
}

ShellProfile make_shell(const RunConfig& c) {
    if (!c.curvature_csv.empty()) return ShellProfile::from_csv(c.curvature_csv);
    if (!(c.K > 0.0)) throw UsageError("--K is the curvature magnitude and must be positive");
    if (c.sign == "positive") return ShellProfile::constant(c.K);
    if (c.sign == "negative") return ShellProfile::constant(-c.K);
    if (c.sign == "zero") return ShellProfile::flat();
    throw UsageError("unknown sign '" + c.sign + "'");
}

// height with the configured curvature: sqrt|K| (x1^2 +- x2^2) / 2
ShellProfile make_height(const RunConfig& c, const Domain& d) {
    const ShellProfile s = make_shell(c);
    if (s.has_height()) return s;
    if (!s.is_constant()) throw UsageError("a shell reference needs a constant curvature");
    const double r = std::sqrt(c.K);
    const Point2 ctr = d.bounding_box().center();
    if (s.sign() == CurvatureSign::positive) return ShellProfile::paraboloid(r, r, ctr);
    if (s.sign() == CurvatureSign::negative) return ShellProfile::paraboloid(r, -r, ctr);
    return ShellProfile::flat();
}

UDecomposition make_u(const RunConfig& c) {
    UDecomposition u;
    if (c.u_kind == "parallel")
        u.kind = UDecomposition::Kind::parallel;
    else if (c.u_kind == "random")
        u.kind = UDecomposition::Kind::random;
    else
        throw UsageError("unknown --u-kind '" + c.u_kind + "' (parallel or random)");
    u.angle = c.u_angle;
    u.seed = c.seed.value_or(0);
    return u;
}

DefectOptions make_defect_options(const RunConfig& c) {
    DefectOptions o;
    o.grid = {c.resolution, c.resolution};
    o.spacing = c.spacing;
    o.u = make_u(c);
    return o;
}

std::filesystem::path out_path(const RunConfig& c, const std::string& name) {
    return std::filesystem::path(c.out_dir) / name;
}

void write_report(const RunConfig& c, const std::string& name, const json& results) {
    json j;
    j["version"] = WRINKLE_VERSION;
    j["config"] = echo(c);
    j["results"] = results;
    write_text(out_path(c, name).string(), j.dump(2) + "\n");
}

json region_summary(const Partition& part) {
    json regions = json::array();
    for (const Region& r : part.regions()) regions.push_back({{"name", r.name}, {"label", to_string(r.label)}});
    return regions;
}

// ---------------------------------------------------------------- commands

int cmd_pattern(const RunConfig& c) {
    const Domain d = make_domain(c);
    const ShellProfile s = make_shell(c);
    const AiryField airy = solve_dual(d, s);
    const Partition part = partition(d, airy);
    const Box bb = d.bounding_box();
    const double spacing = c.spacing > 0.0 ? c.spacing : std::max(bb.width(), bb.height()) / 48.0;
    const StableLineFamily fam = stable_lines(d, airy, spacing, make_u(c));
    write_text(out_path(c, "pattern.svg").string(), pattern_svg(d, part, fam));
    write_pattern_csv(out_path(c, "pattern.csv").string(), fam);
    if (part.has_sigma()) write_medial_csv(out_path(c, "medial.csv").string(), part.sigma());
    json r;
    r["domain"] = d.describe();
    r["shell"] = s.describe();
    r["airy"] = airy.model();
    r["regions"] = region_summary(part);
    r["lines"] = fam.lines.size();
    r["spacing"] = spacing;
    r["sigma"] = part.has_sigma();
    write_report(c, "pattern.json", r);
    return 0;
}

int cmd_dual(const RunConfig& c) {
    const Domain d = make_domain(c);
    const ShellProfile s = make_shell(c);
    const AiryField airy = solve_dual(d, s);
    const AdmissibilityReport adm = check_admissible(airy, d, c.tolerance);
    const GridSpec g{c.resolution, c.resolution};
    const MaskedGrid grid(d, g);
    std::ofstream out(out_path(c, "phi.csv"));
    if (!out) fail(ErrorKind::config, "cannot write phi.csv");
    out << "x,y,phi\n";
    for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i) {
            if (!grid.center_inside(i, j)) continue;
            const Point2 x = grid.center(i, j);
            out << fmt9(x.x) << ',' << fmt9(x.y) << ',' << fmt9(airy(x)) << '\n';
        }
    json r;
    r["domain"] = d.describe();
    r["shell"] = s.describe();
    r["airy"] = airy.model();
    r["sign"] = to_string(airy.sign());
    r["dual_value"] = dual_value(d, s, airy, g);
    r["admissibility"] = {{"trace_max_violation", adm.trace_max_violation},
                          {"convexity_max_violation", adm.convexity_max_violation},
                          {"jump_min", adm.jump_min},
                          {"admissible", adm.admissible(c.tolerance)}};
    write_report(c, "dual.json", r);
    return 0;
}

int cmd_defect(const RunConfig& c) {
    const Domain d = make_domain(c);
    const ShellProfile s = make_shell(c);
    const DefectOptions o = make_defect_options(c);
    const DefectField df = defect_field(d, s, o);
    const double dual = dual_value(d, s, df.airy(), o.grid);
    const ResidualReport rr = curlcurl_residual(df, s, 8);
    write_defect_csv(out_path(c, "defect.csv").string(), df);
    write_text(out_path(c, "defect.svg").string(), defect_svg(df, df.components().front().family));
    json r;
    r["domain"] = d.describe();
    r["shell"] = s.describe();
    r["airy"] = df.airy().model();
    r["primal"] = df.primal();
    r["dual"] = dual;
    r["gap"] = std::abs(df.primal() - dual) / std::max({std::abs(df.primal()), std::abs(dual), 1e-300});
    r["min_lambda"] = df.min_lambda();
    r["sign_violation"] = df.sign_violation();
    r["uncovered_cells"] = df.uncovered();
    r["residual"] = {{"max", rr.max_residual}, {"k_l1", rr.k_l1}, {"tests", rr.tests}};
    write_report(c, "defect.json", r);
    return 0;
}

// target for the herringbone: a constant matrix "xx,xy,yy" or the defect field of the shell
struct Target {
    TargetFunction mu;
    std::optional<DefectField> defect;
    std::optional<TargetDefect> constant;
};

Target make_target(const RunConfig& c, const Domain& d) {
    Target t;
    if (c.mu == "defect") {
        const ShellProfile s = make_shell(c);
        if (s.sign() == CurvatureSign::zero) {
            t.mu = [](Point2) { return std::optional<Sym2>(Sym2{}); };
        } else {
            t.defect.emplace(defect_field(d, s, make_defect_options(c)));
            const DefectField* f = &*t.defect;
            t.mu = [f](Point2 x) { return f->mu_at(x); };
        }
        return t;
    }
    Sym2 m;
    if (std::sscanf(c.mu.c_str(), " %lf , %lf , %lf", &m.xx, &m.xy, &m.yy) != 3)
        throw UsageError("--mu takes 'defect' or 'xx,xy,yy'");
    t.constant = TargetDefect::from(m);
    t.mu = [m](Point2) { return std::optional<Sym2>(m); };
    return t;
}

EnergyParams energy_params(const RunConfig& c) {
    EnergyParams p{c.bend, c.stiffness, c.gamma};
    if (!c.auto_bk.empty()) {
        p.b = c.auto_bk[0];
        p.k = c.auto_bk[1];
    }
    p.validate();
    return p;
}

HerringboneParams herringbone_params(const RunConfig& c, const Domain& d, const Target& t, const EnergyParams& ep) {
    const bool explicit_scales = c.l_wr > 0.0 || c.l_sh > 0.0 || c.l_avg > 0.0 || c.delta_int > 0.0 || c.delta_ext > 0.0;
    if (c.auto_bk.empty() && explicit_scales) {
        HerringboneParams p{c.l_wr, c.l_sh, c.l_avg, c.delta_int, c.delta_ext};
        if (!(p.l_wr > 0.0 && p.l_sh > 0.0 && p.l_avg > 0.0 && p.delta_int > 0.0 && p.delta_ext > 0.0))
            throw UsageError("give all of --l-wr --l-sh --l-avg --delta-int --delta-ext, or none");
        p.validate();
        return p;
    }
    // the length scales do not depend on the ratio, only the validity check does
    if (c.allow_outside_regime) return optimal_params(ep.b, ep.k, 0.0);
    if (t.constant) return optimal_params(ep.b, ep.k, *t.constant);
    const PiecewiseHerringbone probe(d, t.mu, optimal_params(ep.b, ep.k, 0.0), 32, false);
    return optimal_params(ep.b, ep.k, probe.ratio());
}

int cmd_herringbone(const RunConfig& c) {
    const Domain d = make_domain(c);
    const Target t = make_target(c, d);
    const EnergyParams ep = energy_params(c);
    const HerringboneParams p = herringbone_params(c, d, t, ep);
    if (!(c.h_factor >= 16.0)) throw UsageError("--h-factor must be at least 16 (h = l_wr / factor)");
    const PiecewiseHerringbone field(d, t.mu, p, 32, !c.allow_outside_regime);
    const double h = p.l_wr / c.h_factor;
    const DisplacementField f = DisplacementField::sample(field, d.bounding_box(), h);
    write_heightmap_csv(out_path(c, "heightmap.csv").string(), f);
    if (c.write_field) f.write_csv(out_path(c, "field.csv").string());
    write_text(out_path(c, "contour.svg").string(), contour_svg(f, d));
    const HerringboneReport rep = inspect(field, d, h, std::max(1, static_cast<int>(c.h_factor / 16.0)));
    json r;
    r["params"] = {{"l_wr", p.l_wr}, {"l_sh", p.l_sh}, {"l_avg", p.l_avg}, {"delta_int", p.delta_int},
                   {"delta_ext", p.delta_ext}};
    r["h"] = h;
    r["nodes"] = {f.nx(), f.ny()};
    r["squares"] = {field.cols(), field.rows()};
    r["ratio"] = field.ratio();
    r["bulk_strain_max"] = rep.bulk_strain_max;
    r["internal_wall_fraction"] = rep.internal_wall_fraction;
    r["external_wall_fraction"] = rep.external_wall_fraction;
    r["sup"] = {{"v", rep.sup_v}, {"grad_v", rep.sup_grad_v}, {"w", rep.sup_w}, {"grad_w", rep.sup_grad_w},
                {"hess_w", rep.sup_hess_w}};
    r["constants"] = {{"v", rep.c_v}, {"grad_v", rep.c_grad_v}, {"w", rep.c_w}, {"grad_w", rep.c_grad_w},
                      {"hess_w", rep.c_hess_w}};
    write_report(c, "herringbone.json", r);
    return 0;
}

json breakdown(const EnergyBreakdown& e) {
    return {{"stretching", e.stretching}, {"bending", e.bending}, {"substrate", e.substrate},
            {"surface", e.surface},       {"total", e.total}};
}

int cmd_energy(const RunConfig& c) {
    const Domain d = make_domain(c);
    const EnergyParams ep = energy_params(c);
    std::optional<Target> target;
    StrainReference ref;
    if (c.reference == "shell") {
        ref = StrainReference::from_shell(make_height(c, d));
    } else if (c.reference == "target") {
        target.emplace(make_target(c, d));
        ref = StrainReference::from_defect(target->mu);
    } else {
        throw UsageError("--reference takes 'target' or 'shell'");
    }
    json r;
    EnergyReport rep;
    if (!c.field.empty()) {
        const DisplacementField f = DisplacementField::read_csv(c.field);
        rep = evaluate_energy(f, d, ref, ep);
    } else {
        if (!target) target.emplace(make_target(c, d));
        const HerringboneParams p = herringbone_params(c, d, *target, ep);
        const PiecewiseHerringbone field(d, target->mu, p, 32, !c.allow_outside_regime);
        rep = evaluate_energy(field, d, ref, ep, p.l_wr / c.h_factor);
        r["params"] = {{"l_wr", p.l_wr}, {"l_sh", p.l_sh}, {"l_avg", p.l_avg}, {"delta_int", p.delta_int},
                       {"delta_ext", p.delta_ext}};
    }
    r["energy"] = breakdown(rep.energy);
    r["shifted"] = rep.shifted;
    r["gamma_eff"] = ep.gamma_eff();
    r["ratio"] = rep.energy.total / ep.gamma_eff();
    r["area"] = rep.area;
    r["boundary_flux"] = rep.boundary_flux;
    r["h"] = rep.h;
    r["nodes"] = rep.nodes;
    write_report(c, "energy.json", r);
    std::cout << r["energy"].dump(2) << "\n";
    return 0;
}

int cmd_sweep(const RunConfig& c) {
    const Domain d = make_domain(c);
    const ShellProfile s = make_shell(c);
    std::vector<EnergyParams> seq;
    for (double b : c.b_list) seq.push_back({b, c.stiffness, c.gamma});
    ScalingOptions o;
    o.defect = make_defect_options(c);
    o.resolution = c.h_factor;
    o.enforce_regime = !c.allow_outside_regime;
    const ScalingReport rep = scaling_study(d, s, seq, o);
    json pts = json::array();
    for (const ScalingPoint& p : rep.points)
        pts.push_back({{"b", p.params.b},
                       {"k", p.params.k},
                       {"gamma", p.params.gamma},
                       {"x", p.x},
                       {"ratio", p.ratio},
                       {"wrinkling_ratio", p.wrinkling_ratio},
                       {"energy", breakdown(p.energy)},
                       {"l_wr", p.herringbone.l_wr}});
    json r;
    r["points"] = pts;
    r["primal"] = rep.primal;
    r["c1"] = rep.c1;
    r["slope"] = rep.slope;
    r["residuals"] = rep.residuals;
    r["residuals_decreasing"] = rep.residuals_decreasing;
    r["decay_exponent"] = rep.decay_exponent;
    write_report(c, "sweep.json", r);
    std::cout << "C1 " << fmt9(rep.c1) << " slope " << fmt9(rep.slope) << "\n";
    return 0;
}

int cmd_verify(const RunConfig& c) {
    AcceptanceOptions o;
    o.diagnostics = !c.no_diagnostics;
    if (c.seed) o.seed = static_cast<unsigned>(*c.seed);
    std::stringstream ss(c.only);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            o.only.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw UsageError("--only takes a comma-separated list of criterion numbers");
        }
    }
    json rows = json::array();
    bool all = true;
    run_acceptance(o, [&](const CriterionResult& r) {
        std::cout << format_result(r) << std::endl;
        rows.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        all = all && r.pass;
    });
    json r;
    r["criteria"] = rows;
    r["all_pass"] = all;
    write_report(c, "verify.json", r);
    return all ? 0 : 1;
}

// ---------------------------------------------------------------- parsing

void add_domain_shell(CLI::App* s, RunConfig& c) {
    s->add_option("--shape", c.shape, "disc, ellipse, half-disc, rectangle or polygon");
    s->add_option("--a", c.a, "radius or first half-axis");
    s->add_option("--b", c.b, "second half-axis");
    s->add_option("--center", c.center, "centre x y")->expected(2);
    s->add_option("--orientation", c.orientation, "half-disc apex direction (radians)");
    s->add_option("--vertices", c.vertices, "polygon vertices x,y;x,y;...");
    s->add_option("--sign", c.sign, "curvature sign: positive, negative or zero");
    s->add_option("--K", c.K, "curvature magnitude");
    s->add_option("--curvature-csv", c.curvature_csv, "sampled curvature x,y,K");
    s->add_option("--resolution", c.resolution, "grid cells per side (>= 32)");
    s->add_option("--spacing", c.spacing, "stable line spacing");
    s->add_option("--out-dir", c.out_dir, "output directory");
    s->add_option("--seed", c.seed, "seed for the random U decomposition");
    s->add_option("--u-kind", c.u_kind, "U chords: parallel or random");
    s->add_option("--u-angle", c.u_angle, "U chord angle (radians)");
    s->add_option("--tolerance", c.tolerance, "admissibility tolerance");
}

void add_energy(CLI::App* s, RunConfig& c) {
    s->add_option("--bend", c.bend, "bending modulus b");
    s->add_option("--stiffness", c.stiffness, "substrate stiffness k");
    s->add_option("--gamma", c.gamma, "tension gamma");
    s->add_option("--auto", c.auto_bk, "b k: use the optimal length scales")->expected(2);
    s->add_option("--l-wr", c.l_wr, "wrinkle period");
    s->add_option("--l-sh", c.l_sh, "shear band period");
    s->add_option("--l-avg", c.l_avg, "averaging square side");
    s->add_option("--delta-int", c.delta_int, "internal wall width");
    s->add_option("--delta-ext", c.delta_ext, "external wall width");
    s->add_option("--mu", c.mu, "target: 'defect' or constant 'xx,xy,yy'");
    s->add_option("--h-factor", c.h_factor, "lattice spacing h = l_wr / factor");
    s->add_flag("--allow-outside-regime", c.allow_outside_regime, "skip the parameter validity checks");
}

// Splices the JSON config file in front of the command-line flags, so flags win.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + i);
            break;
        }
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config " + path);
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::exception& e) {
        throw UsageError("config " + path + ": " + e.what());
    }
    if (!j.is_object()) throw UsageError("config must be a JSON object");
    std::vector<std::string> file;
    std::string command;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "command") {
            command = it.value().get<std::string>();
            continue;
        }
        const std::string flag = "--" + it.key();
        const json& v = it.value();
        if (v.is_boolean()) {
            if (v.get<bool>()) file.push_back(flag);
        } else if (v.is_array()) {
            file.push_back(flag);
            for (const json& e : v) file.push_back(e.is_string() ? e.get<std::string>() : e.dump());
        } else {
            file.push_back(flag);
            file.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        }
    }
    // the subcommand is the first bare word on the command line, else the file's
    auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) { return a.rfind("-", 0) != 0; });
    std::vector<std::string> out;
    if (sub != args.end() && (sub == args.begin())) {
        out.push_back(*sub);
        args.erase(sub);
    } else if (!command.empty()) {
        out.push_back(command);
    } else {
        throw UsageError("no subcommand given");
    }
    out.insert(out.end(), file.begin(), file.end());
    out.insert(out.end(), args.begin(), args.end());
    return out;
}

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::config:
        case ErrorKind::parameter:
        case ErrorKind::domain:
        case ErrorKind::unsupported:
        case ErrorKind::not_implemented:
        case ErrorKind::consistency:
            return 2;
        default:
            return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"Wrinkle patterns of thin shells on liquid or soft substrates"};
    app.name("wrinkle");
    app.set_version_flag("--version", std::string(WRINKLE_VERSION));
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    struct Sub {
        const char* name;
        const char* help;
        int (*run)(const RunConfig&);
        bool energy;
    };
    const Sub subs[] = {
        {"pattern", "stable lines and singular set as SVG and CSV", cmd_pattern, false},
        {"dual", "optimal Airy potential, dual value and admissibility", cmd_dual, false},
        {"defect", "defect measure mu = lambda eta (x) eta, primal value", cmd_defect, false},
        {"herringbone", "piecewise herringbone heightmap and contour plot", cmd_herringbone, true},
        {"energy", "energy breakdown of a herringbone or a field CSV", cmd_energy, true},
        {"verify", "run the acceptance suite", cmd_verify, false},
        {"sweep", "scaling study over b", cmd_sweep, true},
    };
    int (*selected)(const RunConfig&) = nullptr;
    for (const Sub& s : subs) {
        CLI::App* sc = app.add_subcommand(s.name, s.help);
        add_domain_shell(sc, cfg);
        if (s.energy) add_energy(sc, cfg);
        if (std::string(s.name) == "energy") {
            sc->add_option("--field", cfg.field, "displacement CSV x,y,u1,u2,w");
            sc->add_option("--reference", cfg.reference, "target (mu) or shell (grad p (x) grad p)");
        }
        if (std::string(s.name) == "herringbone")
            sc->add_flag("--write-field", cfg.write_field, "also write u and w as field.csv");
        if (std::string(s.name) == "sweep") sc->add_option("--b-list", cfg.b_list, "bending moduli")->expected(1, 64);
        if (std::string(s.name) == "verify") {
            sc->add_option("--only", cfg.only, "comma-separated criterion numbers");
            sc->add_flag("--no-diagnostics", cfg.no_diagnostics, "skip the unconstrained scaling sweep");
        }
        sc->callback([&cfg, &selected, s] {
            cfg.command = s.name;
            selected = s.run;
        });
    }

    try {
        std::vector<std::string> args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
        if (cfg.resolution < 32) throw UsageError("--resolution must be at least 32");
        std::error_code ec;
        std::filesystem::create_directories(cfg.out_dir, ec);
        if (!std::filesystem::is_directory(cfg.out_dir)) throw UsageError("cannot create " + cfg.out_dir);
        return selected(cfg);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return exit_code(e.kind());
    }
}
