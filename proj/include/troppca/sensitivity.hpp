#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "troppca/tree_sim.hpp"

namespace troppca {

struct SensitivityGrid {
    TopologyMode mode = TopologyMode::fixed_caterpillar;
    std::vector<int> leaves{4};
    std::vector<int> sizes{25};
    std::vector<int> iterations{10, 100, 1000};
    int chains = 10;
    int vertices = 3;
    int cooling_interval = 100;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    /// Throws InvalidInput when a leaf count or sample size is outside the
    /// simulation parameter table, or a list is empty.
    void validate() const;
};

struct SensitivityRow {
    TopologyMode mode;
    int m;
    int n;
    int iterations;
    int chain;
    double r_squared;
    double pi;
    double runtime_ms;
};

/// One dataset per (m, n) drawn with the grid seed, then `chains`
/// independent chains per iteration budget. Rows come in grid order
/// regardless of thread count.
std::vector<SensitivityRow> run_sensitivity(const SensitivityGrid& grid);

/// Header `topology_mode,m,n,iterations,chain,r_squared,pi,runtime_ms`.
std::string sensitivity_csv(const std::vector<SensitivityRow>& rows);

}  // namespace troppca
