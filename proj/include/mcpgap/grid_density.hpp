#pragma once

#include <string>
#include <vector>

namespace mcpgap {

// Uniformly sampled nonnegative density on [a, b]: n cells, n+1 node samples.
// The universal input format for the solvers and bounds.  Endpoint samples may
// vanish; at least one sample must be positive and all must be finite.
struct GridDensity {
    double a = 0.0;
    double b = 1.0;
    int n = 0;
    std::vector<double> samples;

    GridDensity() = default;
    GridDensity(double a_, double b_, std::vector<double> samples_);

    double dx() const { return (b - a) / n; }
    double x(int i) const { return a + (b - a) * i / n; }
    double diameter() const { return b - a; }
    double max_sample() const;

    // Sub-grid from node p to node q (inclusive), same spacing.
    GridDensity slice(int p, int q) const;
    // Every-other-node restriction; requires even n.
    GridDensity coarsen() const;

    std::string to_json() const;
    static GridDensity from_json(const std::string& text);
};

}  // namespace mcpgap
