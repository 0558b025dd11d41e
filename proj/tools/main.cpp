#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "pucci/barriers.hpp"
#include "pucci/classifier.hpp"
#include "pucci/comparison.hpp"
#include "pucci/constants.hpp"
#include "pucci/emden_fowler.hpp"
#include "pucci/errors.hpp"
#include "pucci/monotone_scheme.hpp"
#include "pucci/radial_pucci.hpp"

using namespace pucci;

namespace {

// ---- serialization --------------------------------------------------------

// 17 significant digits round-trip binary64 exactly
std::string num17(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string jstr(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    out += '"';
    return out;
}

// Minimal ordered JSON object builder; values arrive preserialized.
class JsonObj {
public:
    JsonObj& raw(std::string_view key, std::string_view value) {
        body_ += first_ ? "" : ",";
        body_ += std::string(jstr(key)) + ":" + std::string(value);
        first_ = false;
        return *this;
    }
    JsonObj& num(std::string_view key, double x) { return raw(key, num17(x)); }
    JsonObj& integer(std::string_view key, long long v) {
        return raw(key, std::to_string(v));
    }
    JsonObj& str(std::string_view key, std::string_view v) { return raw(key, jstr(v)); }
    JsonObj& boolean(std::string_view key, bool b) { return raw(key, b ? "true" : "false"); }
    std::string close() const { return "{" + body_ + "}"; }

private:
    std::string body_;
    bool first_ = true;
};

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorCode::BadInput, "cannot open '" + path + "' for writing");
    f << text;
}

std::string csv_function(const RadialFunction& f, bool with_derivatives) {
    std::string out = with_derivatives ? "r,u,du,ddu\n" : "r,u\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        out += num17(f.grid[i]) + "," + num17(f.u[i]);
        if (with_derivatives) out += "," + num17(f.du[i]) + "," + num17(f.ddu[i]);
        out += "\n";
    }
    return out;
}

// ---- CSV input --------------------------------------------------------------

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_num(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail(ErrorCode::BadInput, "cannot parse " + what + " value '" + s + "'");
    }
}

// r,u[,du,ddu] with a header row; derivative columns are adopted verbatim,
// otherwise finite differences fill them in
RadialFunction read_function_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(ErrorCode::BadInput, "cannot open '" + path + "'");
    std::string line;
    if (!std::getline(f, line)) fail(ErrorCode::BadInput, "'" + path + "' is empty");
    const std::vector<std::string> head = split(line, ',');
    const bool with_d = head.size() == 4;
    if (!(head.size() == 2 || with_d) || head[0] != "r" || head[1] != "u")
        fail(ErrorCode::BadInput, "'" + path + "' must have header r,u or r,u,du,ddu");
    std::vector<double> r, u, du, ddu;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> c = split(line, ',');
        if (c.size() != head.size())
            fail(ErrorCode::BadInput, "'" + path + "': row with " +
                                          std::to_string(c.size()) + " fields");
        r.push_back(parse_num(c[0], "r"));
        u.push_back(parse_num(c[1], "u"));
        if (with_d) {
            du.push_back(parse_num(c[2], "du"));
            ddu.push_back(parse_num(c[3], "ddu"));
        }
    }
    LogGrid g = LogGrid::from_nodes(std::move(r));
    if (with_d)
        return RadialFunction{std::move(g), std::move(u), std::move(du), std::move(ddu),
                              DerivativeProvenance::Analytic};
    return RadialFunction::from_samples(g, std::move(u));
}

// ---- shared flag groups -----------------------------------------------------

struct Common {
    ProblemParams prm;
    std::string output = "-";
    long long seed = 0;
};

void add_problem_flags(CLI::App* cmd, Common& c, bool with_p, bool p_required = true) {
    cmd->add_option("--lambda", c.prm.lambda, "lower ellipticity constant")->required();
    cmd->add_option("--Lambda", c.prm.Lambda, "upper ellipticity constant")->required();
    cmd->add_option("--N", c.prm.N, "space dimension")->required();
    cmd->add_option("--mu", c.prm.mu, "Hardy potential weight")->required();
    if (with_p) {
        auto* o = cmd->add_option("--p", c.prm.p, "absorption exponent");
        if (p_required) o->required();
    }
    cmd->add_option("-o,--output", c.output, "output path, '-' for stdout");
    cmd->add_option("--seed", c.seed, "seed recorded in metadata (default 0)");
}

std::string config_json(const Common& c, JsonObj extra = {}) {
    JsonObj cfg;
    cfg.num("lambda", c.prm.lambda)
        .num("Lambda", c.prm.Lambda)
        .integer("N", c.prm.N)
        .num("mu", c.prm.mu);
    if (c.prm.has_p()) cfg.num("p", c.prm.p);
    cfg.integer("seed", c.seed);
    const std::string e = extra.close();
    if (e != "{}") cfg.raw("flags", e);
    return cfg.close();
}

// ---- subcommand bodies ------------------------------------------------------

int run_constants(const Common& c, double eq_tol) {
    const ConstantSet cs = derive_constants(c.prm);
    JsonObj j;
    j.num("lambda", cs.prm.lambda)
        .num("Lambda", cs.prm.Lambda)
        .integer("N", cs.prm.N)
        .num("mu", cs.prm.mu);
    if (cs.prm.has_p()) j.num("p", cs.prm.p);
    j.num("Ntilde_plus", cs.Ntilde_plus)
        .num("Ntilde_minus", cs.Ntilde_minus)
        .num("tau", cs.tau)
        .num("tau_minus_op", cs.tau_minus_op)
        .num("lambda_bar", cs.lambda_bar)
        .num("lambda_bar_minus", cs.lambda_bar_minus)
        .num("tau_plus", cs.tau_plus)
        .num("tau_minus", cs.tau_minus)
        .num("p_star", cs.p_star)
        .num("p_star_star", cs.p_star_star)
        .num("K_bar", cs.K_bar);
    if (cs.prm.has_p()) {
        j.num("lambda1", cs.lambda1).num("lambda2", cs.lambda2);
        if (cs.K.has_value()) j.num("K", *cs.K);
        j.str("regime", to_string(classify_regime(cs.prm.p, cs, eq_tol).kind));
    }
    j.boolean("degenerate", cs.degenerate).boolean("in_regime", cs.in_regime);
    j.raw("config", config_json(c));
    emit(c.output, j.close() + "\n");
    return 0;
}

int run_residual(const Common& c, const std::string& input) {
    const RadialFunction u = read_function_csv(input);
    const std::vector<double> res = residual_main(u, c.prm);
    std::string out = "r,residual\n";
    for (std::size_t i = 0; i < u.size(); ++i)
        out += num17(u.grid[i]) + "," + num17(res[i]) + "\n";
    emit(c.output, out);
    return 0;
}

struct BarrierFlags {
    std::string kind;
    std::string dir;
    BarrierParams bp;
    std::string csv;
    double grid_min = 1e-6;
    double grid_max = 0;   // 0: validity radius
    std::size_t grid_nodes = 1024;
    double tol = 1e-12;
};

int run_barrier(const Common& c, const BarrierFlags& bf) {
    const ConstantSet cs = derive_constants(c.prm);
    std::optional<BarrierDirection> dir;
    if (bf.dir == "sub") dir = BarrierDirection::Sub;
    else if (bf.dir == "super") dir = BarrierDirection::Super;
    else if (!bf.dir.empty()) fail(ErrorCode::BadInput, "--dir must be sub or super");
    const Barrier b = make_barrier(barrier_kind_from_string(bf.kind), cs, bf.bp, dir);

    const double hi = bf.grid_max > 0 ? bf.grid_max : b.validity_radius();
    const LogGrid g(bf.grid_min, hi, bf.grid_nodes);
    const SignCertificate sc = try_certify_sign(b, g, bf.tol);

    JsonObj params;
    auto put = [&params](const char* k, const std::optional<double>& v) {
        if (v) params.num(k, *v);
    };
    put("c", b.params().c);
    put("gamma", b.params().gamma);
    put("delta", b.params().delta);
    put("eps", b.params().eps);
    put("a", b.params().a);
    put("b", b.params().b);
    put("k1", b.params().k1);
    put("k2", b.params().k2);
    put("cap", b.params().cap);
    put("c1", b.params().c1);
    put("c2", b.params().c2);
    put("r0", b.params().r0);

    std::string constraints = "[";
    for (std::size_t i = 0; i < b.certificate().size(); ++i) {
        const ConstraintEntry& e = b.certificate()[i];
        constraints += (i ? "," : "") + JsonObj{}
                                            .str("name", e.name)
                                            .num("margin", e.margin)
                                            .boolean("strict", e.strict)
                                            .close();
    }
    constraints += "]";

    JsonObj j;
    j.str("kind", to_string(b.kind()))
        .str("direction", b.direction() == BarrierDirection::Sub ? "sub" : "super")
        .str("target", b.target() == BarrierTarget::MainEquation ? "main" : "v-equation")
        .num("validity_radius", b.validity_radius())
        .raw("params", params.close())
        .raw("certificate", constraints)
        .raw("sign", JsonObj{}
                         .boolean("holds", sc.holds)
                         .integer("violations", (long long)sc.violations)
                         .integer("worst_node", (long long)sc.worst_node)
                         .num("worst_r", sc.worst_r)
                         .num("worst_margin", sc.worst_margin)
                         .num("tol", sc.tol)
                         .num("grid_min", g.r_min())
                         .num("grid_max", g.r_max())
                         .integer("grid_nodes", (long long)g.size())
                         .close())
        .raw("config", config_json(c));
    emit(c.output, j.close() + "\n");
    if (!bf.csv.empty()) emit(bf.csv, csv_function(b.sample(g), true));
    return 0;
}

struct EFFlags {
    double t0 = 0, x0 = 0, xp0 = 0, span = 0;
    std::string direction = "backward";
    EFOptions opt;
    std::string meta;
};

int run_ef_integrate(const Common& c, const EFFlags& ef) {
    const ConstantSet cs = derive_constants(c.prm);
    EFDirection dir;
    if (ef.direction == "forward") dir = EFDirection::Forward;
    else if (ef.direction == "backward") dir = EFDirection::Backward;
    else fail(ErrorCode::BadInput, "--direction must be forward or backward");

    const EFTrajectory tr =
        integrate_ef(cs, EFState{ef.t0, ef.x0, ef.xp0}, ef.span, dir, ef.opt);
    std::string out = "t,x,xp\n";
    for (const EFState& s : tr.states)
        out += num17(s.t) + "," + num17(s.x) + "," + num17(s.xp) + "\n";
    emit(c.output, out);
    if (!ef.meta.empty()) {
        JsonObj j;
        j.str("termination", to_string(tr.termination))
            .str("direction", to_string(tr.direction))
            .integer("accepted", (long long)tr.accepted)
            .integer("rejected", (long long)tr.rejected)
            .raw("final", JsonObj{}
                              .num("t", tr.back().t)
                              .num("x", tr.back().x)
                              .num("xp", tr.back().xp)
                              .close())
            .raw("config", config_json(c));
        emit(ef.meta, j.close() + "\n");
    }
    return 0;
}

int run_ef_equilibria(const Common& c) {
    const ConstantSet cs = derive_constants(c.prm);
    std::string arr = "[";
    bool first = true;
    for (const Equilibrium& e : ef_equilibria(cs)) {
        arr += (first ? "" : ",") +
               JsonObj{}.num("x", e.x).num("nu1", e.nu1).num("nu2", e.nu2).close();
        first = false;
    }
    arr += "]";
    JsonObj j;
    j.raw("equilibria", arr).raw("config", config_json(c));
    emit(c.output, j.close() + "\n");
    return 0;
}

struct SchemeFlags {
    std::string kase = "tau-plus";
    SchemeOptions opt;
    std::string csv;
    std::string stable_csv;
    double agree_tol = 1e-2;
};

int run_scheme_cmd(const Common& c, const SchemeFlags& sf) {
    const ConstantSet cs = derive_constants(c.prm);
    SchemeOptions so = sf.opt;
    so.keep_iterates = true;
    const SchemeResult res = run_scheme(scheme_case_from_string(sf.kase), cs, so);
    const SchemeCertificate& ct = res.certificate;
    JsonObj j;
    j.str("case", sf.kase)
        .raw("certificate", JsonObj{}
                                .boolean("monotone", ct.monotone)
                                .boolean("bracketed", ct.bracketed)
                                .boolean("converged", ct.converged)
                                .integer("n_final", ct.n_final)
                                .num("delta_final", ct.delta_final)
                                .num("residual_norm", ct.residual_norm)
                                .num("mono_worst", ct.mono_worst)
                                .num("bracket_worst", ct.bracket_worst)
                                .close())
        .num("r_min", res.limit.grid.r_min())
        .integer("grid_nodes", (long long)res.limit.size())
        .raw("config", config_json(c, JsonObj{}
                                          .integer("n_start", sf.opt.n_start)
                                          .integer("n_max", sf.opt.n_max)
                                          .integer("nodes_per_octave",
                                                   sf.opt.nodes_per_octave)
                                          .num("agree_tol", sf.agree_tol)));
    emit(c.output, j.close() + "\n");
    if (!sf.csv.empty()) emit(sf.csv, csv_function(res.limit, false));
    if (!sf.stable_csv.empty())
        emit(sf.stable_csv, csv_function(stable_tail(res, sf.agree_tol), false));
    return 0;
}

struct ClassifyFlags {
    std::string input;
    double tail_decades = 3.0;
    ClassifyOptions opt;
    bool bounds = false;
};

int run_classify(const Common& c, const ClassifyFlags& cf) {
    const ConstantSet cs = derive_constants(c.prm);
    RadialFunction u = read_function_csv(cf.input);
    // scheme limits end on a homogeneous Dirichlet zero; drop trailing
    // non-positive samples (interior zeros still fail inside classify)
    std::size_t keep = u.size();
    while (keep > 0 && !(u.u[keep - 1] > 0.0)) --keep;
    const std::size_t trimmed = u.size() - keep;
    if (trimmed > 0) u = u.head(keep);

    const Regime regime = classify_regime(c.prm.p, cs, cf.opt.eq_tol);
    if (regime.kind == RegimeKind::LogCritical && u.grid.r_min() > 1e-10)
        std::fprintf(stderr,
                     "warning: log-critical fits need deep tails; grid reaches only "
                     "r=%s\n",
                     num17(u.grid.r_min()).c_str());

    const AsymptoticClass ac = classify(u, cs, cf.tail_decades, cf.opt);
    JsonObj j;
    j.str("variant", to_string(ac.variant))
        .num("constant", ac.constant)
        .raw("diagnostics",
             JsonObj{}
                 .num("slope", ac.diagnostics.slope)
                 .num("slope_tol", ac.diagnostics.slope_tol)
                 .num("fit_residual", ac.diagnostics.fit_residual)
                 .num("secondary_correction", ac.diagnostics.secondary_correction)
                 .num("window_lo", ac.diagnostics.window_lo)
                 .num("window_hi", ac.diagnostics.window_hi)
                 .integer("window_nodes", (long long)ac.diagnostics.window_nodes)
                 .boolean("regime_consistent", ac.diagnostics.regime_consistent)
                 .close())
        .integer("trimmed_outer", (long long)trimmed)
        .str("regime", to_string(regime.kind));
    if (cf.bounds) {
        const BoundsReport rep = check_asymptotic_bounds(u, cs);
        j.raw("bounds", JsonObj{}
                            .num("power_constant", rep.power_constant)
                            .num("power_slope", rep.power_slope)
                            .boolean("unbounded_observed", rep.unbounded_observed)
                            .boolean("v_check_applies", rep.v_check_applies)
                            .num("v_worst_drop", rep.v_worst_drop)
                            .boolean("log_half_applies", rep.log_half_applies)
                            .num("log_half_constant", rep.log_half_constant)
                            .close());
    }
    j.raw("config", config_json(c, JsonObj{}
                                       .num("tail_decades", cf.tail_decades)
                                       .num("max_r_min", cf.opt.max_r_min)
                                       .num("eq_tol", cf.opt.eq_tol)
                                       .boolean("check_regime", cf.opt.check_regime)));
    emit(c.output, j.close() + "\n");
    return 0;
}

int run_scaled(const Common& c, const std::string& input, double q) {
    const RadialFunction u = read_function_csv(input);
    std::string out = "r,scaled_u\n";
    for (std::size_t i = 0; i < u.size(); ++i)
        out += num17(u.grid[i]) + "," + num17(std::pow(u.grid[i], q) * u.u[i]) + "\n";
    emit(c.output, out);
    return 0;
}

struct CompareFlags {
    std::string u_path, v_path, mode = "annulus";
    double c1g = 0, c2g = 0;   // 0: compute the tightest valid values
    ComparisonOptions opt;
};

int run_compare(const Common& c, const CompareFlags& mf) {
    const RadialFunction u = read_function_csv(mf.u_path);
    const RadialFunction v = read_function_csv(mf.v_path);
    ComparisonReport rep;
    double c1g = mf.c1g, c2g = mf.c2g;
    if (mf.mode == "annulus") {
        rep = check_annulus(u, v, c.prm, mf.opt);
    } else if (mf.mode == "ball") {
        if (c1g <= 0.0 || c2g <= 0.0) {
            const auto tight = growth_constants(u, v, c.prm);
            if (c1g <= 0.0) c1g = tight.first;
            if (c2g <= 0.0) c2g = tight.second;
        }
        rep = check_ball(u, v, c.prm, c1g, c2g, mf.opt);
    } else {
        fail(ErrorCode::BadInput, "--mode must be annulus or ball");
    }
    JsonObj j;
    j.str("mode", mf.mode)
        .num("sup_ratio", rep.sup_ratio)
        .num("boundary_ratio", rep.boundary_ratio)
        .integer("worst_node", (long long)rep.worst_node)
        .num("worst_r", rep.worst_r)
        .boolean("verdict", rep.verdict)
        .raw("hypothesis_check",
             JsonObj{}
                 .num("worst_sub_residual", rep.hypothesis_check.worst_sub_residual)
                 .num("worst_super_residual", rep.hypothesis_check.worst_super_residual)
                 .num("boundary_margin", rep.hypothesis_check.boundary_margin)
                 .boolean("growth_checked", rep.hypothesis_check.growth_checked)
                 .num("lower_growth_margin", rep.hypothesis_check.lower_growth_margin)
                 .num("upper_growth_margin", rep.hypothesis_check.upper_growth_margin)
                 .close());
    if (mf.mode == "ball") j.num("c1g", c1g).num("c2g", c2g);
    j.raw("config", config_json(c));
    emit(c.output, j.close() + "\n");
    return 0;
}

// ---- sweep ------------------------------------------------------------------

struct SweepFlags {
    std::string p_list, mu_list;
    int n_max = 12;
    int nodes = 64;
    int jobs = 0;   // 0: PUCCI_SINGULAR_JOBS or 1
};

std::vector<double> parse_list(const std::string& csv, const std::string& what) {
    std::vector<double> out;
    if (csv.empty()) return out;
    for (const std::string& tok : split(csv, ','))
        if (!tok.empty()) out.push_back(parse_num(tok, what));
    return out;
}

std::string sweep_row(const Common& base, double p, double mu, const SweepFlags& sw) {
    ProblemParams prm = base.prm;
    prm.p = p;
    prm.mu = mu;
    std::string row = num17(p) + "," + num17(mu) + ",";
    try {
        const ConstantSet cs = derive_constants(prm);
        const Regime reg = classify_regime(p, cs);
        row += std::string(to_string(reg.kind)) + "," + num17(cs.p_star) + "," +
               num17(cs.p_star_star) + "," + num17(cs.tau_plus) + "," +
               num17(cs.tau_minus) + "," + (cs.K ? num17(*cs.K) : "") + ",";
        std::optional<SchemeCase> kase;
        switch (reg.kind) {
            case RegimeKind::Subcritical: kase = SchemeCase::TauPlus; break;
            case RegimeKind::Intermediate: kase = SchemeCase::TauMinus; break;
            case RegimeKind::LogCritical: kase = SchemeCase::LogCritical; break;
            case RegimeKind::Supercritical: break;   // no constructive case
        }
        if (!kase.has_value()) return row + "-,,";
        SchemeOptions so;
        so.n_max = sw.n_max;
        so.nodes_per_octave = sw.nodes;
        so.keep_iterates = true;
        const SchemeResult res = run_scheme(*kase, cs, so);
        // survey depths leave a uniform iterate gap of order delta_final;
        // the stability cut must sit above it to expose the converged zone
        const double agree = std::max(1e-2, 3.0 * res.certificate.delta_final);
        ClassifyOptions co;
        co.max_r_min = 1.0;   // accept the depth the sweep budget reaches
        const AsymptoticClass ac = classify(stable_tail(res, agree), cs, 1.0, co);
        row += std::string(to_string(ac.variant)) + "," + num17(ac.constant) + ",";
    } catch (const DomainError& e) {
        // inline per-row error; remaining rows are unaffected
        const std::size_t commas = std::count(row.begin(), row.end(), ',');
        for (std::size_t i = commas; i < 10; ++i) row += ",";
        row += std::string(e.code_name());
    }
    return row;
}

int run_sweep(const Common& c, const SweepFlags& sw) {
    const std::vector<double> ps = parse_list(sw.p_list, "p");
    const std::vector<double> mus = parse_list(sw.mu_list, "mu");
    std::vector<std::pair<double, double>> points;
    for (double p : ps)
        for (double mu : mus) points.emplace_back(p, mu);

    int jobs = sw.jobs;
    if (jobs <= 0) {
        const char* env = std::getenv("PUCCI_SINGULAR_JOBS");
        jobs = env ? std::max(1, std::atoi(env)) : 1;
    }
    jobs = std::min<int>(jobs, std::max<std::size_t>(points.size(), 1));

    std::vector<std::string> rows(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1))
            rows[i] = sweep_row(c, points[i].first, points[i].second, sw);
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    std::string out = "p,mu,regime,p_star,p_star_star,tau_plus,tau_minus,K,variant,"
                      "constant,error\n";
    for (const std::string& r : rows) out += r + "\n";
    emit(c.output, out);
    return 0;
}

// ---- dispatch ---------------------------------------------------------------

int dispatch(int argc, char** argv) {
    CLI::App app{"radial singular solutions of the extremal Hardy absorption equation"};
    app.require_subcommand(1);

    Common c_const, c_res, c_bar, c_efi, c_efe, c_sch, c_cls, c_scl, c_cmp, c_swp;
    double eq_tol = 1e-12;

    CLI::App* cst = app.add_subcommand("constants", "derived constants as flat JSON");
    add_problem_flags(cst, c_const, true, false);
    cst->add_option("--eq-tol", eq_tol, "relative tolerance for p == p**");

    CLI::App* res = app.add_subcommand("residual", "pointwise equation residual of samples");
    std::string res_input;
    add_problem_flags(res, c_res, true);
    res->add_option("--input", res_input, "r,u[,du,ddu] CSV")->required();

    CLI::App* bar = app.add_subcommand("barrier", "instantiate and certify a barrier");
    BarrierFlags bf;
    add_problem_flags(bar, c_bar, true);
    bar->add_option("--kind", bf.kind, "barrier kind name")->required();
    bar->add_option("--dir", bf.dir, "sub|super (power-k only)");
    auto opt_param = [&bar](const char* name, std::optional<double>& slot,
                            const char* help) {
        bar->add_option_function<double>(
            name, [&slot](double v) { slot = v; }, help);
    };
    opt_param("--c", bf.bp.c, "amplitude / log shift");
    opt_param("--gamma", bf.bp.gamma, "decay exponent");
    opt_param("--delta", bf.bp.delta, "correction exponent");
    opt_param("--eps", bf.bp.eps, "small amplitude");
    opt_param("--a", bf.bp.a, "amplitude a");
    opt_param("--b", bf.bp.b, "amplitude b");
    opt_param("--k1", bf.bp.k1, "sub amplitude below K");
    opt_param("--k2", bf.bp.k2, "super amplitude above K");
    opt_param("--cap", bf.bp.cap, "cap amplitude");
    opt_param("--c1", bf.bp.c1, "v-equation sub log shift");
    opt_param("--c2", bf.bp.c2, "v-equation super log shift");
    opt_param("--r0", bf.bp.r0, "validity radius");
    bar->add_option("--csv", bf.csv, "write r,u,du,ddu samples here");
    bar->add_option("--grid-min", bf.grid_min, "certification grid inner radius");
    bar->add_option("--grid-max", bf.grid_max, "outer radius (default validity)");
    bar->add_option("--grid-nodes", bf.grid_nodes, "certification grid nodes");
    bar->add_option("--tol", bf.tol, "relative sign tolerance");

    CLI::App* ef = app.add_subcommand("ef", "Emden-Fowler phase plane");
    ef->require_subcommand(1);
    CLI::App* efi = ef->add_subcommand("integrate", "adaptive RK5(4) trajectory");
    EFFlags eff;
    add_problem_flags(efi, c_efi, true);
    efi->add_option("--t0", eff.t0, "initial t (default 0)");
    efi->add_option("--x0", eff.x0, "initial x")->required();
    efi->add_option("--xp0", eff.xp0, "initial dx/dt")->required();
    efi->add_option("--t-span", eff.span, "|t| distance to cover")->required();
    efi->add_option("--direction", eff.direction, "forward|backward (default backward)");
    efi->add_option("--rel-tol", eff.opt.rel_tol, "relative step tolerance");
    efi->add_option("--abs-tol", eff.opt.abs_tol, "absolute step tolerance");
    efi->add_option("--x-max", eff.opt.x_max, "blow-up threshold");
    efi->add_option("--underflow", eff.opt.x_min, "underflow threshold");
    efi->add_option("--fixed-step", eff.opt.fixed_step, "disable adaptivity");
    efi->add_option("--meta", eff.meta, "write termination metadata JSON here");
    CLI::App* efe = ef->add_subcommand("equilibria", "equilibria and eigenvalues");
    add_problem_flags(efe, c_efe, true);

    CLI::App* sch = app.add_subcommand("scheme", "monotone annulus iteration");
    SchemeFlags sf;
    add_problem_flags(sch, c_sch, true);
    sch->add_option("--case", sf.kase, "tau-plus|tau-minus|log-critical")->required();
    sch->add_option("--n-max", sf.opt.n_max, "deepest octave (r_n = 2^-n)");
    sch->add_option("--n-start", sf.opt.n_start, "first octave");
    sch->add_option("--nodes", sf.opt.nodes_per_octave,
                    "grid intervals per octave (grid on [2^-n, 1] has n*nodes+1 points)");
    sch->add_option("--mono-tol", sf.opt.mono_tol, "monotonicity slack");
    sch->add_option("--bracket-tol", sf.opt.bracket_tol, "bracketing slack");
    sch->add_option("--scheme-tol", sf.opt.scheme_tol, "stopping tolerance");
    sch->add_option("--csv", sf.csv, "write the limit as r,u CSV here");
    sch->add_option("--stable-csv", sf.stable_csv,
                    "write the iterate-stable tail as r,u CSV here");
    sch->add_option("--agree-tol", sf.agree_tol, "stable-tail agreement tolerance");

    CLI::App* cls = app.add_subcommand("classify", "asymptotic class of samples");
    ClassifyFlags cf;
    add_problem_flags(cls, c_cls, true);
    cls->add_option("--input", cf.input, "r,u[,du,ddu] CSV")->required();
    cls->add_option("--tail-decades", cf.tail_decades, "fit window in decades");
    cls->add_option("--max-r-min", cf.opt.max_r_min, "depth gate (default 1e-6)");
    cls->add_option("--eq-tol", cf.opt.eq_tol, "relative tolerance for p == p**");
    cls->add_flag("--check-regime", cf.opt.check_regime,
                  "fail when the variant is impossible in the regime");
    cls->add_flag("--bounds", cf.bounds, "also run the asymptotic bound checks");

    CLI::App* scl = app.add_subcommand("scaled", "emit r, r^q u for plotting");
    std::string scl_input;
    double scl_q = 0;
    scl->add_option("--input", scl_input, "r,u[,du,ddu] CSV")->required();
    scl->add_option("--exponent", scl_q, "q in r^q u")->required();
    scl->add_option("-o,--output", c_scl.output, "output path, '-' for stdout");
    scl->add_option("--seed", c_scl.seed, "seed recorded in metadata");

    CLI::App* cmp = app.add_subcommand("compare", "comparison principle harness");
    CompareFlags mf;
    add_problem_flags(cmp, c_cmp, true);
    cmp->add_option("--u", mf.u_path, "sub-solution CSV")->required();
    cmp->add_option("--v", mf.v_path, "super-solution CSV")->required();
    cmp->add_option("--mode", mf.mode, "annulus|ball");
    cmp->add_option("--c1g", mf.c1g, "lower growth constant (ball)");
    cmp->add_option("--c2g", mf.c2g, "upper growth constant (ball)");
    cmp->add_option("--residual-tol", mf.opt.residual_tol, "residual sign slack");
    cmp->add_option("--ratio-tol", mf.opt.ratio_tol, "verdict slack");

    CLI::App* swp = app.add_subcommand("sweep", "regime/constants/variant table");
    SweepFlags sw;
    swp->add_option("--lambda", c_swp.prm.lambda, "lower ellipticity constant")->required();
    swp->add_option("--Lambda", c_swp.prm.Lambda, "upper ellipticity constant")->required();
    swp->add_option("--N", c_swp.prm.N, "space dimension")->required();
    swp->add_option("--p-values", sw.p_list, "comma list of p values")->required();
    swp->add_option("--mu-values", sw.mu_list, "comma list of mu values")->required();
    swp->add_option("--n-max", sw.n_max, "scheme depth per row (default 12)");
    swp->add_option("--nodes", sw.nodes, "scheme intervals per octave (default 64)");
    swp->add_option("--jobs", sw.jobs, "parallel rows (default PUCCI_SINGULAR_JOBS or 1)");
    swp->add_option("-o,--output", c_swp.output, "output path, '-' for stdout");
    swp->add_option("--seed", c_swp.seed, "seed recorded in metadata");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForAllHelp&) {
        std::printf("%s", app.help("", CLI::AppFormatMode::All).c_str());
        return 0;
    } catch (const CLI::CallForHelp&) {
        std::printf("%s", app.help().c_str());
        return 0;
    }

    if (cst->parsed()) return run_constants(c_const, eq_tol);
    if (res->parsed()) return run_residual(c_res, res_input);
    if (bar->parsed()) return run_barrier(c_bar, bf);
    if (ef->parsed() && efi->parsed()) return run_ef_integrate(c_efi, eff);
    if (ef->parsed() && efe->parsed()) return run_ef_equilibria(c_efe);
    if (sch->parsed()) return run_scheme_cmd(c_sch, sf);
    if (cls->parsed()) return run_classify(c_cls, cf);
    if (scl->parsed()) return run_scaled(c_scl, scl_input, scl_q);
    if (cmp->parsed()) return run_compare(c_cmp, mf);
    if (swp->parsed()) return run_sweep(c_swp, sw);
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "%s\n",
                     JsonObj{}
                         .str("error", e.code_name())
                         .str("message", e.what())
                         .close()
                         .c_str());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n",
                     JsonObj{}.str("error", "BadInput").str("message", e.what()).close().c_str());
        return 1;
    }
}
