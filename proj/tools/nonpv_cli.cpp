// nonpv: command-line front end.
#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

#include "config.hpp"
#include "nonpv/acceptance.hpp"
#include "nonpv/cocycle.hpp"
#include "nonpv/correlation.hpp"
#include "nonpv/diffraction.hpp"
#include "nonpv/format.hpp"
#include "nonpv/inflation.hpp"
#include "nonpv/lyapunov.hpp"
#include "nonpv/parallel.hpp"

using namespace nonpv;
using namespace nonpv::cli;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAcceptance = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

const char* kFooter = R"(Configuration file (--config FILE):
  Flat key=value lines, '#' starts a comment. Global options use their long
  name, subcommand options are prefixed with the subcommand path:
      seed=42
      threads=4
      lyapunov.steps=300
      lyapunov.direction=in
      diffraction.F.level=7
  Values given on the command line override the file, which overrides the
  built-in defaults. Unknown keys are an error.

Output:
  Data goes to --out FILE (default '-', standard output). A manifest with the
  configuration, library versions, seed and wall time is written to
  FILE.manifest.json, or as one line on standard error when writing to
  standard output. Numbers are printed with 17 significant digits; summaries
  add a rounded value in parentheses.

Exit status:
  0 success, 1 acceptance failure (verify-all), 2 invalid configuration,
  3 numerical failure (for example a singular step at the requested k).)";

std::string both(double x, int digits = 6) { return fmt17(x) + " (" + fmt_short(x, digits) + ")"; }

std::string weights_str(const Weights& u)
{
    std::ostringstream os;
    for (int i = 0; i < 2; ++i) os << (i ? "," : "") << fmt17(u[i].real()) << ':' << fmt17(u[i].imag());
    return os.str();
}

struct Options {
    // gen
    int gen_level = 3;
    std::string gen_u = "1,1";
    std::string gen_emit = "csv";
    // corr
    bool corr_base = false;
    std::string corr_extend;
    // algebra
    std::string algebra_emit = "text";
    // lyapunov
    std::string ly_direction = "in";
    std::string ly_k = "0.01";
    long ly_steps = 300;
    std::string ly_start = "generic";
    std::string ly_emit = "csv";
    // torusmean
    int tm_n = 4;
    double tm_tol = 1e-4;
    int tm_order = 8;
    // diffraction F
    std::string df_u = "balanced";
    double df_xmax = 3.0;
    int df_grid = 1500;
    int df_level = 8;
    std::string df_emit = "csv";
    // diffraction scan
    std::string ds_u = "1,1";
    std::string ds_k = "0,0.5,1";
    std::string ds_levels = "5..9";
    double ds_threshold = 1e-4;
    std::string ds_emit = "json";
    // verify-all
    bool va_quick = false;
    std::vector<int> va_only;
};

void check_emit(const std::string& v, std::initializer_list<const char*> allowed)
{
    for (const char* a : allowed)
        if (v == a) return;
    std::string msg = "unsupported --emit '" + v + "', expected one of:";
    for (const char* a : allowed) msg += std::string(" ") + a;
    throw ConfigError(msg);
}

int run_gen(RunContext& ctx, const Options& o)
{
    check_emit(o.gen_emit, {"csv", "json"});
    if (o.gen_level < 1 || o.gen_level > 10) throw ConfigError("gen --level must be in [1, 10]");
    Weights u = parse_weights(o.gen_u);
    ctx.params = {{"level", o.gen_level}, {"u", weights_str(u)}, {"emit", o.gen_emit}};
    auto patch = geometric_patch(o.gen_level, u);
    const auto& pts = patch.lattice();
    DataSink sink(ctx);
    auto& os = sink.stream();
    if (o.gen_emit == "csv") {
        os << "pos_a,pos_b,pos_float,tile_type,weight_re,weight_im\n";
        for (std::size_t i = 0; i < patch.size(); ++i) {
            cplx w = patch.weight(i);
            os << pts[i].a << ',' << pts[i].b << ',' << fmt17(pts[i].to_double()) << ',' << patch.type(i) << ','
               << fmt17(w.real()) << ',' << fmt17(w.imag()) << '\n';
        }
    } else {
        json j;
        j["level"] = o.gen_level;
        j["word"] = patch.word().str();
        j["radius"] = patch.radius();
        json a = json::array();
        for (std::size_t i = 0; i < patch.size(); ++i) a.push_back({pts[i].a, pts[i].b, patch.type(i)});
        j["points"] = std::move(a);
        os << j.dump() << '\n';
    }
    write_manifest(ctx, kExitOk, {{"rows", patch.size()}});
    return kExitOk;
}

int run_corr(RunContext& ctx, const Options& o)
{
    if (o.corr_base == !o.corr_extend.empty()) throw ConfigError("corr needs exactly one of --base or --extend R");
    auto t = base_system_solve();
    if (!o.corr_extend.empty()) {
        ZLambda R;
        try {
            R = parse_zlambda(o.corr_extend);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("invalid --extend radius: ") + e.what());
        }
        if (R.to_double() <= 0.0 || R.to_double() > 100.0) throw ConfigError("--extend radius must be in (0, 100]");
        t = extend_table(t, R);
        ctx.params = {{"extend", o.corr_extend}};
    } else {
        ctx.params = {{"base", true}};
    }
    DataSink sink(ctx);
    write_table_csv(sink.stream(), t);
    write_manifest(ctx, kExitOk, {{"rows", t.entries.size()}});
    return kExitOk;
}

int run_algebra(RunContext& ctx, const Options& o)
{
    check_emit(o.algebra_emit, {"text", "json"});
    ctx.params = {{"emit", o.algebra_emit}};
    std::vector<int> ida;
    for (int len = 0; len <= 3; ++len) ida.push_back(ida_dimension(len));
    auto kr = kron_algebra_real_dimension({0.05, 0.11, 0.17});
    double k_star = positivity_threshold();
    DataSink sink(ctx);
    auto& os = sink.stream();
    if (o.algebra_emit == "json") {
        json j = {{"ida_dimension_by_word_length", ida},
                  {"kronecker_real_dimension", kr.dimension},
                  {"max_commutator_residual", kr.max_commutator_residual},
                  {"max_u_realness_residual", kr.max_u_realness_residual},
                  {"positivity_threshold", k_star}};
        os << j.dump(2) << '\n';
    } else {
        for (int len = 0; len <= 3; ++len) os << "ida_dimension(word length <= " << len << ") = " << ida[len] << '\n';
        os << "kronecker algebra real dimension = " << kr.dimension << '\n';
        os << "max |[C, A(k)]| = " << both(kr.max_commutator_residual, 3) << '\n';
        os << "max |Im U A(k) U^-1| = " << both(kr.max_u_realness_residual, 3) << '\n';
        os << "positivity threshold k* = " << both(k_star, 5) << '\n';
    }
    write_manifest(ctx, kExitOk);
    return kExitOk;
}

int run_lyapunov(RunContext& ctx, const Options& o)
{
    check_emit(o.ly_emit, {"csv"});
    if (o.ly_direction != "in" && o.ly_direction != "out") throw ConfigError("--direction must be 'in' or 'out'");
    if (o.ly_start != "generic" && o.ly_start != "contracting") throw ConfigError("--start must be 'generic' or 'contracting'");
    if (o.ly_steps < 1 || o.ly_steps > 10000000) throw ConfigError("--steps must be in [1, 1e7]");
    if (o.ly_direction == "in" && o.ly_steps > 100000) throw ConfigError("inward --steps must be <= 1e5");
    std::string how;
    const double k = parse_k(o.ly_k, &how);
    ctx.params = {{"direction", o.ly_direction}, {"k", k},         {"k_input", o.ly_k}, {"k_sampling", how},
                  {"steps", o.ly_steps},         {"start", o.ly_start}, {"emit", o.ly_emit}};

    std::vector<double> log_norms;
    double offset = 0.0;
    std::size_t first_step = 0;
    json summary;
    if (o.ly_direction == "in") {
        const int n = static_cast<int>(o.ly_steps);
        LyapunovTrace tr = o.ly_start == "generic" ? inward_lyapunov(k, Vec2(1.0, 1.0), n) : inward_lyapunov_contracting(k, n);
        log_norms = tr.log_norms;
        offset = log_norms.front();
        summary = {{"slope", tr.slope}, {"residual_band", tr.residual_band}};
    } else {
        if (o.ly_start != "generic") throw ConfigError("--start contracting applies to the inward direction only");
        OutwardReport r = outward_lyapunov(k, o.ly_steps, true);
        log_norms = r.log_norms;
        first_step = 1;
        summary = {{"chi1", r.chi1}, {"chi2", r.chi2}, {"det_term", r.det_term}, {"consistency", r.consistency}};
    }
    DataSink sink(ctx);
    auto& os = sink.stream();
    os << "step,log_norm,running_slope\n";
    for (std::size_t i = 0; i < log_norms.size(); ++i) {
        std::size_t step = i + first_step;
        os << step << ',' << fmt17(log_norms[i]) << ',';
        if (step > 0) os << fmt17((log_norms[i] - offset) / static_cast<double>(step));
        os << '\n';
    }
    std::cerr << "k = " << both(k) << '\n';
    for (auto it = summary.begin(); it != summary.end(); ++it) std::cerr << it.key() << " = " << both(it.value().get<double>()) << '\n';
    write_manifest(ctx, kExitOk, {{"summary", summary}});
    return kExitOk;
}

int run_torusmean(RunContext& ctx, const Options& o)
{
    if (o.tm_n < 1 || o.tm_n > 12) throw ConfigError("--n must be in [1, 12]");
    if (!(o.tm_tol > 0.0)) throw ConfigError("--tol must be positive");
    if (o.tm_order < 1 || o.tm_order > 64) throw ConfigError("--order must be in [1, 64]");
    ctx.params = {{"n", o.tm_n}, {"tol", o.tm_tol}, {"order", o.tm_order}};
    auto r = torus_mean_log_norm(o.tm_n, o.tm_order, o.tm_tol);
    const double half_log = 0.5 * std::log(kLambda);
    DataSink sink(ctx);
    auto& os = sink.stream();
    os << "refinement history (panels per axis, value):\n";
    for (const auto& [panels, v] : r.history) os << "  " << panels << "  " << both(v, 7) << '\n';
    os << "mean (1/2n) log |B~^(n)|_F^2 = " << both(r.value, 7) << (r.converged ? "" : "  [NOT CONVERGED]") << '\n';
    os << "log sqrt(lambda)            = " << both(half_log, 7) << '\n';
    os << "gap                         = " << both(half_log - r.value, 5) << '\n';
    write_manifest(ctx, r.converged ? kExitOk : kExitRuntime, {{"value", r.value}, {"converged", r.converged}});
    return r.converged ? kExitOk : kExitRuntime;
}

int run_diffraction_F(RunContext& ctx, const Options& o)
{
    check_emit(o.df_emit, {"csv"});
    if (o.df_level < 2 || o.df_level > 10) throw ConfigError("--level must be in [2, 10]");
    if (!(o.df_xmax > 0.0) || o.df_xmax > 100.0) throw ConfigError("--xmax must be in (0, 100]");
    if (o.df_grid < 1 || o.df_grid > 1000000) throw ConfigError("--grid must be in [1, 1e6]");
    Weights u = parse_weights(o.df_u);
    ctx.params = {{"u", weights_str(u)}, {"u_input", o.df_u}, {"xmax", o.df_xmax},
                  {"grid", o.df_grid},   {"level", o.df_level}, {"emit", o.df_emit}};
    auto c = distribution_with_previous(u, o.df_xmax, o.df_grid, o.df_level);
    DataSink sink(ctx);
    auto& os = sink.stream();
    os << "x,F,F_prev_level,delta\n";
    for (std::size_t i = 0; i < c.current.xs.size(); ++i)
        os << fmt17(c.current.xs[i]) << ',' << fmt17(c.current.Fs[i]) << ',' << fmt17(c.previous.Fs[i]) << ','
           << fmt17(c.current.Fs[i] - c.previous.Fs[i]) << '\n';
    std::cerr << "F(xmax)/xmax = " << both(c.current.Fs.back() / o.df_xmax) << '\n';
    std::cerr << "relative level difference at xmax = " << both(c.rel_diff_at_xmax, 3) << '\n';
    std::cerr << "min increment = " << both(c.min_increment, 3) << (c.non_decreasing ? "" : "  [DECREASES]") << '\n';
    for (const auto& w : c.warnings) std::cerr << "warning: " << w << '\n';
    write_manifest(ctx, kExitOk,
                   {{"rel_diff_at_xmax", c.rel_diff_at_xmax}, {"min_increment", c.min_increment}, {"nodes", c.current.nodes},
                    {"rule", c.current.rule}, {"warnings", c.warnings}});
    return kExitOk;
}

int run_diffraction_scan(RunContext& ctx, const Options& o)
{
    check_emit(o.ds_emit, {"json", "csv"});
    Weights u = parse_weights(o.ds_u);
    auto ks = parse_real_list(o.ds_k);
    auto levels = parse_levels(o.ds_levels);
    for (int l : levels)
        if (l < 1 || l > 12) throw ConfigError("scan levels must lie in [1, 12]");
    if (!(o.ds_threshold > 0.0)) throw ConfigError("--threshold must be positive");
    ctx.params = {{"u", weights_str(u)}, {"u_input", o.ds_u}, {"k", ks}, {"levels", levels}, {"threshold", o.ds_threshold},
                  {"emit", o.ds_emit}};
    BraggReport rep;
    try {
        rep = bragg_scan(u, ks, levels, o.ds_threshold);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    DataSink sink(ctx);
    auto& os = sink.stream();
    if (o.ds_emit == "json") {
        json j;
        j["levels"] = rep.levels;
        j["threshold"] = rep.threshold;
        j["peaks"] = rep.peaks;
        json entries = json::array();
        for (const auto& e : rep.entries)
            entries.push_back({{"k", e.k}, {"intensities", e.intensities}, {"decay_ratio", e.decay_ratio}, {"bragg", e.bragg}});
        j["entries"] = std::move(entries);
        os << j.dump(2) << '\n';
    } else {
        os << "k,level,intensity,bragg\n";
        for (const auto& e : rep.entries)
            for (std::size_t i = 0; i < rep.levels.size(); ++i)
                os << fmt17(e.k) << ',' << rep.levels[i] << ',' << fmt17(e.intensities[i]) << ',' << (e.bragg ? 1 : 0) << '\n';
    }
    std::cerr << rep.peaks << " Bragg peak(s) among " << rep.entries.size() << " k values\n";
    write_manifest(ctx, kExitOk, {{"peaks", rep.peaks}});
    return kExitOk;
}

int run_verify_all(RunContext& ctx, const Options& o)
{
    for (int id : o.va_only)
        if (id < 1 || id > kCriterionCount) throw ConfigError("--only entries must be in [1, " + std::to_string(kCriterionCount) + "]");
    ctx.params = {{"quick", o.va_quick}, {"only", o.va_only}};
    AcceptanceOptions opt;
    opt.seed = ctx.seed;
    opt.quick = o.va_quick;
    opt.only = o.va_only;
    DataSink sink(ctx);
    auto& os = sink.stream();
    opt.on_result = [&os](const CriterionResult& r) { os << format_result(r) << '\n' << std::flush; };
    auto results = run_acceptance(opt);
    int passed = 0;
    json table = json::array();
    for (const auto& r : results) {
        passed += r.pass ? 1 : 0;
        table.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"measured", r.measured}, {"target", r.target}});
    }
    os << passed << "/" << results.size() << " criteria passed\n";
    int status = passed == static_cast<int>(results.size()) ? kExitOk : kExitAcceptance;
    write_manifest(ctx, status, {{"criteria", table}});
    return status;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact generation, correlations, cocycles and diffraction for the 0 -> 0111, 1 -> 0 inflation.", "nonpv"};
    app.footer(kFooter);
    app.set_version_flag("--version", NONPV_VERSION);
    app.set_config("--config", "", "Flat key=value configuration file (see below)");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);
    app.fallthrough();

    RunContext ctx;
    Options o;
    app.add_option("--seed", ctx.seed, "Seed for randomised checks")->capture_default_str();
    app.add_option("--threads", ctx.threads, "Worker threads, 0 for all available")->capture_default_str();
    app.add_option("--out", ctx.out, "Output file, '-' for standard output")->capture_default_str();

    auto* gen = app.add_subcommand("gen", "Two-sided fixed-point patch rho^(2 level)(0|0)");
    gen->add_option("--level", o.gen_level, "Patch level")->capture_default_str();
    gen->add_option("--u", o.gen_u, "Weights 'a,b' (complex as re:im) or 'balanced'")->capture_default_str();
    gen->add_option("--emit", o.gen_emit, "csv or json")->capture_default_str();

    auto* corr = app.add_subcommand("corr", "Exact pair correlation tables");
    corr->add_flag("--base", o.corr_base, "Closed system for |z| <= 1 + lambda");
    corr->add_option("--extend", o.corr_extend, "Extend to radius R, written 'a', 'a+b*l' or 'a,b'");

    auto* alg = app.add_subcommand("algebra", "Algebra dimensions, residuals and the positivity threshold");
    alg->add_option("--emit", o.algebra_emit, "text or json")->capture_default_str();

    auto* ly = app.add_subcommand("lyapunov", "Inward or outward cocycle iteration; CSV step,log_norm,running_slope");
    ly->add_option("--direction", o.ly_direction, "in or out")->capture_default_str();
    ly->add_option("--k", o.ly_k, "k value or random:SEED")->capture_default_str();
    ly->add_option("--steps", o.ly_steps, "Number of steps")->capture_default_str();
    ly->add_option("--start", o.ly_start, "Inward start vector: generic (1,1) or contracting")->capture_default_str();
    ly->add_option("--emit", o.ly_emit, "csv")->capture_default_str();

    auto* tm = app.add_subcommand("torusmean", "Quasiperiodic torus mean of the log Frobenius norm");
    tm->add_option("--n", o.tm_n, "Product length")->capture_default_str();
    tm->add_option("--tol", o.tm_tol, "Refinement tolerance")->capture_default_str();
    tm->add_option("--order", o.tm_order, "Gauss-Legendre nodes per panel")->capture_default_str();

    auto* diff = app.add_subcommand("diffraction", "Diffraction distribution function and Bragg scans");
    diff->require_subcommand(1);
    auto* dF = diff->add_subcommand("F", "Distribution function; CSV x,F,F_prev_level,delta");
    dF->add_option("--u", o.df_u, "Weights")->capture_default_str();
    dF->add_option("--xmax", o.df_xmax, "Upper end of [0, xmax]")->capture_default_str();
    dF->add_option("--grid", o.df_grid, "Number of grid intervals")->capture_default_str();
    dF->add_option("--level", o.df_level, "Patch level")->capture_default_str();
    dF->add_option("--emit", o.df_emit, "csv")->capture_default_str();
    auto* dS = diff->add_subcommand("scan", "Bragg classification over levels");
    dS->add_option("--u", o.ds_u, "Weights")->capture_default_str();
    dS->add_option("--k", o.ds_k, "Comma separated k values")->capture_default_str();
    dS->add_option("--levels", o.ds_levels, "Levels 'a..b' or a list")->capture_default_str();
    dS->add_option("--threshold", o.ds_threshold, "Minimum intensity of a peak")->capture_default_str();
    dS->add_option("--emit", o.ds_emit, "json or csv")->capture_default_str();

    auto* va = app.add_subcommand("verify-all", "Run the acceptance suite and print a pass/fail table");
    va->add_flag("--quick", o.va_quick, "Accepted for compatibility; the full suite already fits the time budget");
    va->add_option("--only", o.va_only, "Restrict to these criteria")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }
    if (auto* cfg = app.get_config_ptr(); cfg && cfg->count() > 0) ctx.config_file = cfg->as<std::string>();

    try {
        set_thread_count(ctx.threads);
        if (gen->parsed()) return ctx.command = "gen", run_gen(ctx, o);
        if (corr->parsed()) return ctx.command = "corr", run_corr(ctx, o);
        if (alg->parsed()) return ctx.command = "algebra", run_algebra(ctx, o);
        if (ly->parsed()) return ctx.command = "lyapunov", run_lyapunov(ctx, o);
        if (tm->parsed()) return ctx.command = "torusmean", run_torusmean(ctx, o);
        if (dF->parsed()) return ctx.command = "diffraction F", run_diffraction_F(ctx, o);
        if (dS->parsed()) return ctx.command = "diffraction scan", run_diffraction_scan(ctx, o);
        if (va->parsed()) return ctx.command = "verify-all", run_verify_all(ctx, o);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitConfig;
}
