#include "lufid/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lufid/bounds.hpp"
#include "lufid/closed_form.hpp"
#include "lufid/fidelity.hpp"
#include "lufid/probes.hpp"
#include "lufid/rng.hpp"
#include "lufid/sdp.hpp"

namespace lufid {

namespace {

std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

nlohmann::json matrix_json(const ComplexMatrix& m) {
    std::vector<std::vector<double>> re(m.rows(), std::vector<double>(m.cols()));
    std::vector<std::vector<double>> im(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            re[i][j] = m(i, j).real();
            im[i][j] = m(i, j).imag();
        }
    return nlohmann::json{{"re", re}, {"im", im}};
}

// key=value list -> map; value may contain a bracketed vector
std::map<std::string, std::string> parse_kv(const std::string& body) {
    std::map<std::string, std::string> out;
    std::size_t pos = 0;
    while (pos < body.size()) {
        const std::size_t eq = body.find('=', pos);
        if (eq == std::string::npos)
            throw BadParameter("state spec: expected key=value near '" + body.substr(pos) + "'");
        const std::string key = body.substr(pos, eq - pos);
        std::size_t end = eq + 1;
        int depth = 0;
        while (end < body.size() && (depth > 0 || body[end] != ',')) {
            if (body[end] == '[' || body[end] == '(') ++depth;
            if (body[end] == ']' || body[end] == ')') --depth;
            ++end;
        }
        out[key] = body.substr(eq + 1, end - eq - 1);
        pos = (end < body.size()) ? end + 1 : end;
    }
    return out;
}

double parse_double(const std::map<std::string, std::string>& kv, const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw BadParameter("state spec: missing parameter '" + key + "'");
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw BadParameter("state spec: bad number for '" + key + "'");
    }
}

std::size_t parse_count(const std::map<std::string, std::string>& kv, const std::string& key) {
    const double v = parse_double(kv, key);
    if (v < 0 || v != std::floor(v)) throw BadParameter("state spec: '" + key + "' not a count");
    return static_cast<std::size_t>(v);
}

std::vector<cplx> parse_ket(const std::string& text) {
    std::string body = text;
    if (body.size() >= 2 && body.front() == '[' && body.back() == ']')
        body = body.substr(1, body.size() - 2);
    std::vector<cplx> ket;
    std::size_t pos = 0;
    while (pos < body.size()) {
        if (body[pos] == '(') {
            const std::size_t close = body.find(')', pos);
            if (close == std::string::npos) throw BadParameter("ket: unclosed complex entry");
            const std::string pair = body.substr(pos + 1, close - pos - 1);
            const std::size_t comma = pair.find(',');
            if (comma == std::string::npos) throw BadParameter("ket: complex entry needs (re,im)");
            ket.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
            pos = close + 1;
            if (pos < body.size() && body[pos] == ',') ++pos;
        } else {
            std::size_t end = body.find(',', pos);
            if (end == std::string::npos) end = body.size();
            const std::string item = body.substr(pos, end - pos);
            if (!item.empty()) ket.emplace_back(std::stod(item), 0.0);
            pos = (end < body.size()) ? end + 1 : end;
        }
    }
    if (ket.empty()) throw BadParameter("ket: no entries");
    return ket;
}

struct ParsedPair {
    DensityMatrix a, b;
};
ParsedPair parse_pair(const std::string& sa, const std::string& sb) {
    ParsedPair p{parse_state(sa), parse_state(sb)};
    if (p.a.d1 != p.b.d1 || p.a.d2 != p.b.d2)
        throw DimensionMismatch("states have different bipartite splits");
    return p;
}

}  // namespace

OptimizerConfig optimizer_config(const RunOptions& opt) {
    OptimizerConfig cfg;
    cfg.restarts = opt.restarts;
    cfg.max_iters = opt.max_iters;
    cfg.seed = opt.seed;
    cfg.grad_tol = opt.tol;
    return cfg;
}

DensityMatrix parse_state(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    if (colon == std::string::npos)
        throw BadParameter("state spec '" + spec + "': expected kind:params");
    const std::string kind = spec.substr(0, colon);
    const std::string body = spec.substr(colon + 1);
    if (kind == "file") {
        std::ifstream f(body);
        if (!f) throw IoError("cannot open state file " + body);
        std::stringstream ss;
        ss << f.rdbuf();
        return density_from_json(ss.str());
    }
    const auto kv = parse_kv(body);
    if (kind == "werner") return werner(parse_count(kv, "d"), parse_double(kv, "t"));
    if (kind == "iso") return isotropic(parse_count(kv, "d"), parse_double(kv, "lam"));
    if (kind == "maxent") return projector(max_entangled(parse_count(kv, "d")));
    if (kind == "mm") {
        const std::size_t d1 = parse_count(kv, "d1"), d2 = parse_count(kv, "d2");
        if (d1 * d2 == 0) throw BadParameter("mm: dimensions must be positive");
        ComplexMatrix m = ComplexMatrix::identity(d1 * d2);
        m *= cplx(1.0 / static_cast<double>(d1 * d2), 0.0);
        return make_density(std::move(m), d1, d2);
    }
    if (kind == "random")
        return random_density(parse_count(kv, "d1"), parse_count(kv, "d2"),
                              parse_count(kv, "rank"), parse_count(kv, "seed"));
    if (kind == "pure") {
        const auto it = kv.find("ket");
        if (it == kv.end()) throw BadParameter("pure: missing ket=[...]");
        std::vector<cplx> ket = parse_ket(it->second);
        std::size_t d1, d2;
        if (kv.count("d1") && kv.count("d2")) {
            d1 = parse_count(kv, "d1");
            d2 = parse_count(kv, "d2");
        } else {
            const double root = std::sqrt(static_cast<double>(ket.size()));
            d1 = d2 = static_cast<std::size_t>(std::lround(root));
            if (d1 * d2 != ket.size())
                throw BadParameter("pure: give d1,d2 for non-square ket length");
        }
        if (d1 * d2 != ket.size()) throw BadParameter("pure: ket length is not d1*d2");
        const double norm = ket_norm(ket);
        if (norm < 1e-12) throw BadParameter("pure: zero ket");
        for (cplx& z : ket) z /= norm;
        return projector(PureState{std::move(ket), d1, d2});
    }
    throw BadParameter("unknown state kind '" + kind + "'");
}

std::string report_to_json(const OptimizationReport& report) {
    nlohmann::json j;
    j["value"] = report.value;
    j["per_restart_values"] = report.per_restart_values;
    j["iterations_used"] = report.iterations_used;
    j["converged"] = report.converged;
    j["local_unitary"] = {{"u1", matrix_json(report.local_unitary.u1)},
                          {"u2", matrix_json(report.local_unitary.u2)}};
    return j.dump();
}

std::string cmd_fidelity(const std::string& state_a, const std::string& state_b) {
    const ParsedPair p = parse_pair(state_a, state_b);
    nlohmann::json j;
    j["fidelity"] = fidelity(p.a, p.b);
    j["affine_fidelity"] = affine_fidelity(p.a.mat, p.b.mat);
    const double rel = relative_entropy(p.a, p.b);
    j["relative_entropy"] = std::isinf(rel) ? nlohmann::json("infinity") : nlohmann::json(rel);
    return j.dump();
}

std::string cmd_gmax(const std::string& state_a, const std::string& state_b,
                     const RunOptions& opt) {
    const ParsedPair p = parse_pair(state_a, state_b);
    return report_to_json(gmax(p.a, p.b, optimizer_config(opt)));
}

std::string cmd_gmin(const std::string& state_a, const std::string& state_b,
                     const RunOptions& opt) {
    const ParsedPair p = parse_pair(state_a, state_b);
    return report_to_json(gmin(p.a, p.b, optimizer_config(opt)));
}

std::string cmd_werner_curve(std::size_t d, std::size_t t_steps, const RunOptions& opt) {
    if (d < 2) throw BadParameter("werner-curve: d must be >= 2");
    if (t_steps < 1) throw BadParameter("werner-curve: steps must be >= 1");
    const DensityMatrix product = [&] {
        std::vector<cplx> ket(d * d, cplx(0.0, 0.0));
        ket[0] = cplx(1.0, 0.0);
        return projector(PureState{std::move(ket), d, d});
    }();
    std::ostringstream csv;
    csv << "t,gmax_formula,gmax_numeric\n";
    for (std::size_t k = 0; k <= t_steps; ++k) {
        const double t = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(t_steps);
        const double formula = gmax_werner_vs_pure_product(d, t);
        OptimizerConfig cfg = optimizer_config(opt);
        std::mt19937_64 mix = substream(opt.seed, 0xc0de00ULL + k);
        cfg.seed = mix();
        const double numeric = gmax(werner(d, t), product, cfg).value;
        csv << csv_number(t) << "," << csv_number(formula) << "," << csv_number(numeric)
            << "\n";
    }
    return csv.str();
}

std::string cmd_bounds(const std::string& state_a, const std::string& state_b,
                       const RunOptions& opt) {
    const ParsedPair p = parse_pair(state_a, state_b);
    const OptimizerConfig cfg = optimizer_config(opt);
    const DensityMatrix sigmap = complement_state(p.b);

    const OptimizationReport gmax_rep = gmax(p.a, p.b, cfg);
    const OptimizationReport gmin_rep = gmin(p.a, p.b, cfg);
    const OptimizationReport gminp_rep = gmin(p.a, sigmap, cfg);

    // feasible-point estimate of min_W S(rho || W sigma W^dag) for the
    // relative-entropy side of the gmax lower bound
    std::optional<double> rel_min;
    if (psd_rank(p.b.mat) == p.b.mat.rows()) {
        OptimizerConfig rel_cfg = cfg;
        rel_cfg.mode = OptimizeMode::Minimize;
        rel_cfg.restarts = std::max<std::size_t>(4, cfg.restarts / 4);
        rel_min = relative_entropy_extremum(p.a, p.b, rel_cfg).value;
    }

    BoundReport up = gmax_upper_bound(p.a, p.b);
    check_bound_against(up, gmax_rep.value);
    BoundReport lo = gmax_lower_bound(p.a, p.b, rel_min);
    check_bound_against(lo, gmax_rep.value);
    BoundReport upn = gmin_upper_bound(p.a, p.b);
    check_bound_against(upn, gmin_rep.value);
    BoundReport lon = gmin_lower_bound(p.a, p.b);
    check_bound_against(lon, gmin_rep.value);
    const BoundReport p1 = prop1_check(p.a, p.b, gmax_rep.value, gminp_rep.value);
    const BoundReport p2 = prop2_check(p.a, p.b, gmax_rep, gminp_rep);

    nlohmann::json j;
    j["gmax"] = gmax_rep.value;
    j["gmin"] = gmin_rep.value;
    j["gmin_complement"] = gminp_rep.value;
    j["reports"] = nlohmann::json::array();
    const BoundReport* all[] = {&up, &lo, &upn, &lon, &p1, &p2};
    for (const BoundReport* r : all)
        j["reports"].push_back(nlohmann::json::parse(bound_to_json(*r)));
    return j.dump();
}

std::string cmd_sdp_export(const std::string& state_a, const std::string& state_b,
                           const std::string& path) {
    const ParsedPair p = parse_pair(state_a, state_b);
    const SdpProblem prob = build_problem(p.a.mat, p.b.mat);
    export_sdpa(prob, path);

    const ComplexMatrix xstar = optimal_primal(prob);
    const FeasibilityCheck primal = check_primal_feasible(prob, xstar);
    const ComplexMatrix eye = ComplexMatrix::identity(prob.order);
    const FeasibilityCheck dual = check_dual_feasible(prob, eye, eye);

    nlohmann::json j;
    j["path"] = path;
    j["order"] = prob.order;
    j["fidelity"] = fidelity(p.a, p.b);
    j["primal_objective"] = primal.objective;
    j["primal_feasible"] = primal.feasible;
    j["primal_min_eigenvalue"] = primal.min_eigenvalue;
    j["dual_identity_objective"] = dual.objective;
    j["dual_identity_feasible"] = dual.feasible;
    return j.dump();
}

std::string cmd_distill(const std::string& state, std::size_t n, const RunOptions& opt) {
    const DensityMatrix rho = parse_state(state);
    return distill_to_json(distill_probe(rho, n, optimizer_config(opt)));
}

std::string cmd_distill_werner_sweep(std::size_t d, std::size_t t_steps, std::size_t n,
                                     const RunOptions& opt) {
    if (d < 2) throw BadParameter("distill sweep: d must be >= 2");
    if (t_steps < 1) throw BadParameter("distill sweep: steps must be >= 1");
    std::ostringstream csv;
    csv << "t,min_pt_eigenvalue,x_shift,witness_value,distillable_flag\n";
    for (std::size_t k = 0; k <= t_steps; ++k) {
        const double t = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(t_steps);
        OptimizerConfig cfg = optimizer_config(opt);
        std::mt19937_64 mix = substream(opt.seed, 0xd15c0ULL + k);
        cfg.seed = mix();
        const DistillReport rep = distill_probe(werner(d, t), n, cfg);
        csv << csv_number(t) << "," << csv_number(rep.min_pt_eigenvalue) << ","
            << csv_number(rep.x_shift) << "," << csv_number(rep.witness_value) << ","
            << (rep.distillable_flag ? 1 : 0) << "\n";
    }
    return csv.str();
}

std::string cmd_commute(const std::string& state_a, const std::string& state_b,
                        const RunOptions& opt) {
    const ParsedPair p = parse_pair(state_a, state_b);
    const CommutativityReport rep = commutativity_experiment(p.a, p.b, optimizer_config(opt));
    nlohmann::json j;
    j["best_commutator_norm"] = rep.best_norm;
    j["per_restart_norms"] = rep.best.per_restart_values;
    j["converged"] = rep.best.converged;
    j["rho_multiplicities"] = rep.rho_multiplicities;
    j["sigma_multiplicities"] = rep.sigma_multiplicities;
    j["local_unitary"] = {{"u1", matrix_json(rep.best.local_unitary.u1)},
                          {"u2", matrix_json(rep.best.local_unitary.u2)}};
    return j.dump();
}

bool write_output(const RunOptions& opt, const std::string& payload) {
    if (opt.out.empty()) return false;
    std::ofstream f(opt.out);
    if (!f) throw IoError("cannot open output file " + opt.out);
    f << payload;
    if (!payload.empty() && payload.back() != '\n') f << "\n";
    return true;
}

}  // namespace lufid
