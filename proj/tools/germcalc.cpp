// germcalc: truncated power-series calculus, coprimality decisions, flows
// and planar-foliation holonomy from the command line.  JSON in, JSON out;
// every report embeds the configuration that produced it.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "germcalc/calculus.hpp"
#include "germcalc/coprimality.hpp"
#include "germcalc/flows.hpp"
#include "germcalc/foliation.hpp"
#include "germcalc/io.hpp"
#include "germcalc/norms.hpp"

using namespace germcalc;

namespace {

struct GlobalOpts {
    std::string mode = "exact";
    bool mode_explicit = false;
    std::string format = "json";
    std::string out;
};

void render_text(const json& j, std::ostream& os, int indent = 0)
{
    std::string pad(static_cast<std::size_t>(indent), ' ');
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (v.is_object() || v.is_array()) {
                os << pad << k << ":\n";
                render_text(v, os, indent + 2);
            } else {
                os << pad << k << ": " << v.dump() << "\n";
            }
        }
    } else if (j.is_array()) {
        for (const auto& v : j) {
            if (v.is_object() || v.is_array()) {
                os << pad << "-\n";
                render_text(v, os, indent + 2);
            } else {
                os << pad << "- " << v.dump() << "\n";
            }
        }
    } else {
        os << pad << j.dump() << "\n";
    }
}

void emit(const GlobalOpts& g, json config, json result)
{
    json report;
    report["config"] = std::move(config);
    report["result"] = std::move(result);

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!g.out.empty()) {
        file.open(g.out);
        if (!file) throw domain_error("cannot open output file: " + g.out);
        os = &file;
    }
    if (g.format == "text")
        render_text(report, *os);
    else
        *os << report.dump(2) << "\n";
}

bool exact_mode(const GlobalOpts& g)
{
    if (g.mode == "exact") return true;
    if (g.mode == "approx") return false;
    throw domain_error("unknown mode '" + g.mode + "' (use exact or approx)");
}

json verdict_to_json(const CoprimalityVerdict& v)
{
    json out;
    switch (v.status) {
    case CoprimalityVerdict::Status::coprime_certified: out["status"] = "coprime-certified"; break;
    case CoprimalityVerdict::Status::composite_consistent:
        out["status"] = "composite-consistent";
        break;
    case CoprimalityVerdict::Status::inputs_degenerate: out["status"] = "inputs-degenerate"; break;
    }
    out["witness_d"] = v.witness_d;
    json ranks = json::array();
    for (const auto& r : v.ranks)
        ranks.push_back(json{{"d", r.d}, {"rank", r.rank}, {"bound", r.bound}});
    out["ranks"] = std::move(ranks);
    return out;
}

json complexes_to_json(const Complex& c) { return json{{"re", c.real()}, {"im", c.imag()}}; }

template <class S>
json run_compose(const std::vector<std::string>& paths, unsigned order)
{
    Series<S> f = load_series<S>(paths[0]);
    std::vector<Series<S>> g;
    for (std::size_t i = 1; i < paths.size(); ++i) g.push_back(load_series<S>(paths[i]));
    return series_to_json(jet(compose(f, g), order));
}

template <class S>
json run_invert(const std::string& path)
{
    DiffeoGerm<S> d(load_series<S>(path));
    return series_to_json(comp_inverse(d).series());
}

template <class S>
json run_solvable2(const std::string& fpath, const std::string& gpath, unsigned order)
{
    DiffeoGerm<S> f(load_series<S>(fpath));
    DiffeoGerm<S> g(load_series<S>(gpath));
    auto r = solvable2_test(f, g, order);
    json out;
    out["passes_at_truncation"] = r.passes;
    out["order"] = r.order;
    if (!r.passes) out["fail_degree"] = r.fail_degree;
    out["necessary_only"] = true; // passing a finite order never certifies solvability
    return out;
}

template <class S>
json run_flow(const std::string& path, unsigned order)
{
    json doc = load_json_file(path);
    if (!doc.contains("components") || !doc.at("components").is_array())
        throw domain_error("vector-field document needs a 'components' array");
    std::vector<Series<S>> comps;
    for (const auto& c : doc.at("components")) comps.push_back(series_from_json<S>(c));
    VectorField<S> X(comps);
    auto Phi = flow_series(X, order);
    json out;
    json arr = json::array();
    std::vector<std::string> names = default_var_names(X.dim());
    names.push_back("t");
    for (const auto& c : Phi.components) arr.push_back(series_to_json(c, names));
    out["order"] = order;
    out["components"] = std::move(arr);
    return out;
}

template <class S>
json run_odesolve(const std::string& ppath, unsigned k, const std::string& jpath, unsigned order)
{
    Series<S> P = series_from_json<S>(load_json_file(ppath));
    Series<S> J = jpath.empty() ? Series<S>::zero(1, k) : load_series<S>(jpath);
    OdeSpec<S> spec(k, P);
    return series_to_json(ode_solve(J, spec, order));
}

json run_foliation(const GlobalOpts& g, const std::string& ppath, const std::string& qpath,
                   bool check, bool singular, bool holo, bool solv, const std::string& loop_spec,
                   unsigned fit_degree, double tol, unsigned samples, unsigned order)
{
    auto P = load_series<GaussianRational>(ppath);
    auto Q = load_series<GaussianRational>(qpath);
    auto fp = FoliationPair::make(P, Q);

    json out;
    auto gate = rnd_star_test(fp);
    out["coprimality"] = verdict_to_json(fp.verdict);
    out["rnd_star"] = json{{"member", gate.member},
                           {"violations", gate.violations},
                           {"discriminant",
                            scalar_traits<GaussianRational>::to_string(gate.discriminant)}};
    if (check && !singular && !holo && !solv) return out;

    auto pts = singular_data(fp);
    json spts = json::array();
    for (const auto& p : pts)
        spts.push_back(json{{"u", complexes_to_json(p.u)},
                            {"lambda_x", complexes_to_json(p.lambda_x)},
                            {"lambda_u", complexes_to_json(p.lambda_u)},
                            {"ratio", complexes_to_json(p.ratio)}});
    out["singular_points"] = std::move(spts);
    if (!holo && !solv) return out;

    if (exact_mode(g) && g.mode_explicit)
        throw domain_error("holonomy is numeric: exact mode is rejected here "
                           "(drop --mode exact or pass --mode approx)");

    TransportSettings settings;
    settings.fit_degree = fit_degree;
    settings.rel_tol = tol > 0 ? tol : settings.rel_tol;
    settings.samples = samples;

    std::vector<Complex> roots;
    for (const auto& p : pts) roots.push_back(p.u);
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            gap = std::min(gap, std::abs(roots[i] - roots[j]));

    if (holo) {
        LoopSpec loop;
        if (loop_spec.rfind("around:", 0) == 0) {
            std::size_t j = std::stoul(loop_spec.substr(7));
            if (j >= roots.size()) throw domain_error("loop index out of range");
            loop = LoopSpec::around_avoiding(Complex{0, 0}, roots[j], 0.3 * gap, roots,
                                             settings.margin_factor * gap);
        } else if (loop_spec == "composite") {
            Complex centroid{0, 0};
            for (Complex r : roots) centroid += r / static_cast<double>(roots.size());
            double spread = 0;
            for (Complex r : roots) spread = std::max(spread, std::abs(r - centroid));
            double radius = spread + 0.45 * gap;
            if (std::abs(centroid) <= radius)
                throw domain_error("composite loop cannot be based at the chart origin "
                                   "for this root configuration");
            loop = LoopSpec::around(Complex{0, 0}, centroid, radius, 96);
        } else {
            throw domain_error("unknown --loop spec '" + loop_spec
                               + "' (use around:J or composite)");
        }
        auto h = holonomy(fp, loop, settings);
        json fit = json::array();
        for (const auto& c : h.fitted.coeffs) fit.push_back(complexes_to_json(c));
        out["holonomy"] = json{{"fitted", std::move(fit)},
                               {"residual", h.residual},
                               {"low_confidence", h.low_confidence},
                               {"samples", h.samples.size()}};
    }
    if (solv) {
        auto rep = solvability_report(fp, order == 0 ? 6 : order, settings);
        const char* verdict = rep.verdict == SolvabilityReport::Verdict::passes ? "passes"
                              : rep.verdict == SolvabilityReport::Verdict::fails ? "fails"
                                                                                 : "inconclusive";
        json sj{{"verdict", verdict},
                {"order", rep.order},
                {"margin", rep.margin},
                {"residual", rep.residual}};
        if (rep.verdict == SolvabilityReport::Verdict::fails) sj["fail_degree"] = rep.fail_degree;
        out["solvability"] = std::move(sj);
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"germcalc: calculus in spaces of convergent power series"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--mode", g.mode, "scalar mode: exact (rationals) or approx (doubles)")
        ->check(CLI::IsMember({"exact", "approx"}));
    app.add_option("--format", g.format, "output format: json or text")
        ->check(CLI::IsMember({"json", "text"}));
    app.add_option("--out", g.out, "write the report to a file instead of stdout");

    // norm
    auto* norm_cmd = app.add_subcommand("norm", "weighted coefficient norm of a series");
    double alpha = 1.0, beta = 0.5;
    std::string input;
    norm_cmd->add_option("--alpha", alpha, "factorial weight exponent")->required();
    norm_cmd->add_option("--input", input, "series JSON file")->required();

    // dconst
    auto* dconst_cmd = app.add_subcommand("dconst", "optimal derivative-bound constant");
    unsigned k = 1;
    dconst_cmd->add_option("-k,--k", k, "derivative order")->required();
    dconst_cmd->add_option("--alpha", alpha, "target exponent")->required();
    dconst_cmd->add_option("--beta", beta, "source exponent")->required();

    // compose
    auto* compose_cmd = app.add_subcommand("compose", "substitute series into a series");
    std::vector<std::string> compose_paths;
    unsigned order = 8;
    compose_cmd->add_option("files", compose_paths, "f.json g1.json [g2.json ...]")
        ->expected(-2);
    compose_cmd->add_option("--order", order, "output truncation order");

    // invert
    auto* invert_cmd = app.add_subcommand("invert", "compositional inverse of a diffeo germ");
    std::string invert_path;
    invert_cmd->add_option("file", invert_path, "d.json")->required();

    // solvable2
    auto* solv2_cmd = app.add_subcommand("solvable2", "two-generator solvability relation");
    std::string fpath, gpath;
    solv2_cmd->add_option("f", fpath, "f.json")->required();
    solv2_cmd->add_option("g", gpath, "g.json")->required();
    solv2_cmd->add_option("--order", order, "jet order of the check");

    // coprime
    auto* coprime_cmd = app.add_subcommand("coprime", "finite-time coprimality decision");
    std::vector<std::string> coprime_paths;
    unsigned dmax = 4;
    int milnor_n = -1;
    coprime_cmd->add_option("files", coprime_paths, "f1.json f2.json [...]")->expected(-2);
    coprime_cmd->add_option("--dmax", dmax, "largest rank to scan");
    coprime_cmd->add_option("--milnor", milnor_n, "also estimate the Milnor dimension at N");

    // flow
    auto* flow_cmd = app.add_subcommand("flow", "Lie-series flow of a vector field");
    std::string flow_path;
    flow_cmd->add_option("file", flow_path, "X.json with a components array")->required();
    flow_cmd->add_option("--order", order, "total degree of the flow series");

    // odesolve
    auto* ode_cmd = app.add_subcommand("odesolve", "scalar ODE solution via the companion flow");
    std::string ppath, jpath;
    ode_cmd->add_option("P", ppath, "P.json in variables (z, d0..dk)")->required();
    ode_cmd->add_option("--k", k, "order of the equation")->required();
    ode_cmd->add_option("--jet", jpath, "jet J.json of degree <= k");
    ode_cmd->add_option("--order", order, "output truncation order");

    // foliation
    auto* fol_cmd = app.add_subcommand("foliation", "blow-up and holonomy of y' = P/Q");
    std::string fol_p, fol_q, loop_spec = "around:0";
    bool fol_check = false, fol_sing = false, fol_holo = false, fol_solv = false;
    unsigned fit_degree = 6, samples = 8;
    double tol = 0.0;
    unsigned fol_order = 0;
    fol_cmd->add_option("P", fol_p, "P.json")->required();
    fol_cmd->add_option("Q", fol_q, "Q.json")->required();
    fol_cmd->add_flag("--check", fol_check, "exact class-membership gates only");
    fol_cmd->add_flag("--singular", fol_sing, "singular points and eigenvalue pairs");
    fol_cmd->add_flag("--holonomy", fol_holo, "numeric holonomy germ along a loop");
    fol_cmd->add_flag("--solvability", fol_solv, "two-generator solvability report");
    fol_cmd->add_option("--loop", loop_spec, "around:J or composite");
    fol_cmd->add_option("--fit-degree", fit_degree, "degree of the fitted germ");
    fol_cmd->add_option("--tol", tol, "transport relative tolerance");
    fol_cmd->add_option("--samples", samples, "transported starting points");
    fol_cmd->add_option("--order", fol_order, "jet order of the solvability check");

    CLI11_PARSE(app, argc, argv);
    g.mode_explicit = app.count("--mode") > 0;

    try {
        json config{{"mode", g.mode}, {"format", g.format}};
        json result;

        if (norm_cmd->parsed()) {
            config["subcommand"] = "norm";
            config["alpha"] = alpha;
            config["input"] = input;
            NormReport r = exact_mode(g)
                               ? a_norm(load_series<GaussianRational>(input),
                                        WeightSequence::factorial(alpha))
                               : a_norm(load_series<Complex>(input),
                                        WeightSequence::factorial(alpha));
            result = json{{"value", r.value},
                          {"truncation_order", r.truncation_order},
                          {"tail_bounded", r.tail_bounded}};
        } else if (dconst_cmd->parsed()) {
            config["subcommand"] = "dconst";
            config["k"] = k;
            config["alpha"] = alpha;
            config["beta"] = beta;
            auto d = deriv_constant(k, alpha, beta);
            result = json{{"value", d.value}, {"argmax", d.argmax}, {"root", d.root}};
        } else if (compose_cmd->parsed()) {
            config["subcommand"] = "compose";
            config["files"] = compose_paths;
            config["order"] = order;
            result = exact_mode(g) ? run_compose<GaussianRational>(compose_paths, order)
                                   : run_compose<Complex>(compose_paths, order);
        } else if (invert_cmd->parsed()) {
            config["subcommand"] = "invert";
            config["file"] = invert_path;
            result = exact_mode(g) ? run_invert<GaussianRational>(invert_path)
                                   : run_invert<Complex>(invert_path);
        } else if (solv2_cmd->parsed()) {
            config["subcommand"] = "solvable2";
            config["order"] = order;
            result = exact_mode(g) ? run_solvable2<GaussianRational>(fpath, gpath, order)
                                   : run_solvable2<Complex>(fpath, gpath, order);
        } else if (coprime_cmd->parsed()) {
            config["subcommand"] = "coprime";
            config["files"] = coprime_paths;
            config["dmax"] = dmax;
            if (!exact_mode(g))
                throw domain_error("coprimality ranks need exact arithmetic: use --mode exact");
            std::vector<ExactSeries> f;
            for (const auto& p : coprime_paths) f.push_back(load_series<GaussianRational>(p));
            result = verdict_to_json(decide_coprime(f, dmax));
            if (milnor_n >= 0) {
                config["milnor"] = milnor_n;
                auto m = milnor_dim_estimate(f, static_cast<unsigned>(milnor_n));
                result["milnor"] = json{{"dim", m.dim}, {"stabilized", m.stabilized}};
            }
        } else if (flow_cmd->parsed()) {
            config["subcommand"] = "flow";
            config["file"] = flow_path;
            config["order"] = order;
            result = exact_mode(g) ? run_flow<GaussianRational>(flow_path, order)
                                   : run_flow<Complex>(flow_path, order);
        } else if (ode_cmd->parsed()) {
            config["subcommand"] = "odesolve";
            config["P"] = ppath;
            config["k"] = k;
            config["order"] = order;
            result = exact_mode(g) ? run_odesolve<GaussianRational>(ppath, k, jpath, order)
                                   : run_odesolve<Complex>(ppath, k, jpath, order);
        } else if (fol_cmd->parsed()) {
            config["subcommand"] = "foliation";
            config["P"] = fol_p;
            config["Q"] = fol_q;
            config["loop"] = loop_spec;
            config["fit_degree"] = fit_degree;
            config["samples"] = samples;
            if (tol > 0) config["tol"] = tol;
            result = run_foliation(g, fol_p, fol_q, fol_check, fol_sing, fol_holo, fol_solv,
                                   loop_spec, fit_degree, tol, samples, fol_order);
        }

        // numeric-confidence failures still carry a full report, then exit 3
        bool low_confidence =
            (result.contains("holonomy") && result["holonomy"]["low_confidence"].get<bool>())
            || (result.contains("solvability")
                && result["solvability"]["verdict"].get<std::string>() == "inconclusive");
        emit(g, std::move(config), std::move(result));
        if (low_confidence) {
            std::cerr << "numeric-confidence failure: see the report flags\n";
            return 3;
        }
        return 0;
    } catch (const numeric_error& e) {
        std::cerr << "numeric-confidence failure: " << e.what() << "\n";
        return 3;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
