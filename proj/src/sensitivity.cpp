#include "troppca/sensitivity.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <thread>

#include "troppca/error.hpp"
#include "troppca/io.hpp"
#include "troppca/pca_mcmc.hpp"

namespace troppca {

void SensitivityGrid::validate() const {
    if (leaves.empty() || sizes.empty() || iterations.empty()) throw InvalidInput("sensitivity lists must be nonempty");
    for (int m : leaves) {
        if (std::find(std::begin(kTableLeaves), std::end(kTableLeaves), m) == std::end(kTableLeaves)) {
            throw InvalidInput("leaf count " + std::to_string(m) + " is not in the parameter table (4..9)");
        }
    }
    for (int n : sizes) {
        if (std::find(std::begin(kTableSizes), std::end(kTableSizes), n) == std::end(kTableSizes)) {
            throw InvalidInput("sample size " + std::to_string(n) + " is not in the parameter table {5,25,50,100,1000}");
        }
    }
    for (int it : iterations) {
        if (it < 1) throw InvalidInput("iteration counts must be positive");
    }
    if (chains < 1) throw InvalidInput("chains must be at least 1");
}

std::vector<SensitivityRow> run_sensitivity(const SensitivityGrid& grid) {
    grid.validate();
    struct Item {
        std::size_t dataset;
        int iterations;
        int chain;
    };
    std::vector<std::vector<Ultrametric>> datasets;
    std::vector<std::pair<int, int>> shapes;
    std::vector<Item> items;
    for (int m : grid.leaves) {
        for (int n : grid.sizes) {
            const auto trees = simulate(SimConfig{m, n, grid.mode, grid.seed});
            std::vector<Ultrametric> us;
            for (const auto& t : trees) us.push_back(cophenetic(t));
            datasets.push_back(std::move(us));
            shapes.emplace_back(m, n);
            for (int it : grid.iterations) {
                for (int c = 0; c < grid.chains; ++c) items.push_back({datasets.size() - 1, it, c});
            }
        }
    }

    std::vector<SensitivityRow> rows(items.size());
    std::vector<std::exception_ptr> errors(items.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < items.size(); i = next++) {
            const Item& item = items[i];
            McmcConfig cfg;
            cfg.vertices = grid.vertices;
            cfg.iterations = item.iterations;
            cfg.cooling_interval = grid.cooling_interval;
            cfg.seed = grid.seed;
            try {
                const auto start = std::chrono::steady_clock::now();
                const PcaFit f = run_chain(datasets[item.dataset], cfg, item.chain);
                const std::chrono::duration<double, std::milli> took = std::chrono::steady_clock::now() - start;
                rows[i] = SensitivityRow{grid.mode, shapes[item.dataset].first, shapes[item.dataset].second,
                                         item.iterations, item.chain, f.stats.r_squared, f.stats.pi, took.count()};
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(grid.threads, 1, std::max<std::size_t>(items.size(), 1));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

std::string sensitivity_csv(const std::vector<SensitivityRow>& rows) {
    std::string out = "topology_mode,m,n,iterations,chain,r_squared,pi,runtime_ms\n";
    for (const auto& r : rows) {
        out += std::string(mode_name(r.mode)) + "," + std::to_string(r.m) + "," + std::to_string(r.n) + "," +
               std::to_string(r.iterations) + "," + std::to_string(r.chain) + "," + format_double(r.r_squared) + "," +
               format_double(r.pi) + "," + format_double(r.runtime_ms, 6) + "\n";
    }
    return out;
}

}  // namespace troppca
