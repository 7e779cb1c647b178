#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lufid/cli.hpp"

namespace {

int emit(const lufid::RunOptions& opt, const std::string& payload) {
    if (!lufid::write_output(opt, payload)) {
        std::cout << payload;
        if (!payload.empty() && payload.back() != '\n') std::cout << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"extremal fidelity over local unitary orbits"};
    app.require_subcommand(1);
    app.fallthrough();

    lufid::RunOptions opt;
    app.add_option("--seed", opt.seed, "RNG seed (all commands are deterministic under it)");
    app.add_option("--restarts", opt.restarts, "optimizer restarts");
    app.add_option("--max-iters", opt.max_iters, "optimizer iteration cap");
    app.add_option("--tol", opt.tol, "optimizer gradient tolerance");
    app.add_option("--format", opt.format, "json|csv (commands with a single format ignore it)");
    app.add_option("--out", opt.out, "output file (default stdout)");

    std::string state_a, state_b, state, path = "problem.dat-s";
    std::size_t dim = 3, steps = 20, copies = 1;

    CLI::App* fid = app.add_subcommand("fidelity", "fidelity, affine fidelity, relative entropy");
    fid->add_option("state_a", state_a)->required();
    fid->add_option("state_b", state_b)->required();

    CLI::App* gmx = app.add_subcommand("gmax", "maximal fidelity over the local orbit");
    gmx->add_option("state_a", state_a)->required();
    gmx->add_option("state_b", state_b)->required();

    CLI::App* gmn = app.add_subcommand("gmin", "minimal fidelity over the local orbit");
    gmn->add_option("state_a", state_a)->required();
    gmn->add_option("state_b", state_b)->required();

    CLI::App* curve = app.add_subcommand("werner-curve", "formula vs numeric gmax sweep (CSV)");
    curve->add_option("-d,--dim", dim, "local dimension");
    curve->add_option("--steps", steps, "number of t intervals on [-1, 1]");

    CLI::App* bnd = app.add_subcommand("bounds", "bound suite with optimizer cross-checks");
    bnd->add_option("state_a", state_a)->required();
    bnd->add_option("state_b", state_b)->required();

    CLI::App* sdp = app.add_subcommand("sdp-export", "SDPA export plus certificate summary");
    sdp->add_option("state_a", state_a)->required();
    sdp->add_option("state_b", state_b)->required();
    sdp->add_option("--path", path, "output .dat-s path");

    std::size_t sweep_d = 0;
    CLI::App* dist = app.add_subcommand("distill", "Schmidt-rank-two distillability probe");
    dist->add_option("state", state);
    dist->add_option("-n,--copies", copies, "tensor power");
    dist->add_option("--werner-sweep", sweep_d,
                     "sweep the Werner family of this dimension over t (CSV)");
    dist->add_option("--steps", steps, "t intervals for --werner-sweep");

    CLI::App* comm = app.add_subcommand("commute", "commutator minimization experiment");
    comm->add_option("state_a", state_a)->required();
    comm->add_option("state_b", state_b)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (fid->parsed()) return emit(opt, lufid::cmd_fidelity(state_a, state_b));
        if (gmx->parsed()) return emit(opt, lufid::cmd_gmax(state_a, state_b, opt));
        if (gmn->parsed()) return emit(opt, lufid::cmd_gmin(state_a, state_b, opt));
        if (curve->parsed()) return emit(opt, lufid::cmd_werner_curve(dim, steps, opt));
        if (bnd->parsed()) return emit(opt, lufid::cmd_bounds(state_a, state_b, opt));
        if (sdp->parsed()) return emit(opt, lufid::cmd_sdp_export(state_a, state_b, path));
        if (dist->parsed()) {
            if (sweep_d > 0)
                return emit(opt, lufid::cmd_distill_werner_sweep(sweep_d, steps, copies, opt));
            if (state.empty()) {
                std::cerr << "invalid input: distill needs a state or --werner-sweep\n";
                return 2;
            }
            return emit(opt, lufid::cmd_distill(state, copies, opt));
        }
        if (comm->parsed()) return emit(opt, lufid::cmd_commute(state_a, state_b, opt));
    } catch (const lufid::NonFinite& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const lufid::SingularRetraction& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const lufid::ConvergenceFailure& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const lufid::Error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
