#pragma once

#include <cstdint>
#include <string>

#include "lufid/orbit_opt.hpp"

namespace lufid {

// Shared command-line knobs; every command is deterministic under a fixed
// seed and emits machine-readable output (JSON unless noted).
struct RunOptions {
    std::uint64_t seed = 0;
    std::size_t restarts = 24;
    std::size_t max_iters = 500;
    double tol = 1e-9;  // optimizer gradient tolerance
    std::string format = "json";
    std::string out;  // empty = stdout
};

OptimizerConfig optimizer_config(const RunOptions& opt);

// Named-state mini-language:
//   werner:d=3,t=0.5       iso:d=2,lam=0.9      maxent:d=2
//   pure:d1=2,d2=2,ket=[1,0,0,1]   (entries: real or (re,im); normalized)
//   random:d1=2,d2=2,rank=4,seed=7  mm:d1=2,d2=2   file:state.json
DensityMatrix parse_state(const std::string& spec);

std::string cmd_fidelity(const std::string& state_a, const std::string& state_b);
std::string cmd_gmax(const std::string& state_a, const std::string& state_b,
                     const RunOptions& opt);
std::string cmd_gmin(const std::string& state_a, const std::string& state_b,
                     const RunOptions& opt);
std::string cmd_werner_curve(std::size_t d, std::size_t t_steps, const RunOptions& opt);
std::string cmd_bounds(const std::string& state_a, const std::string& state_b,
                       const RunOptions& opt);
std::string cmd_sdp_export(const std::string& state_a, const std::string& state_b,
                           const std::string& path);
std::string cmd_distill(const std::string& state, std::size_t n, const RunOptions& opt);
std::string cmd_distill_werner_sweep(std::size_t d, std::size_t t_steps, std::size_t n,
                                     const RunOptions& opt);
std::string cmd_commute(const std::string& state_a, const std::string& state_b,
                        const RunOptions& opt);

std::string report_to_json(const OptimizationReport& report);

// Writes to opt.out or returns false to signal stdout.
bool write_output(const RunOptions& opt, const std::string& payload);

}  // namespace lufid
