#pragma once

#include "dmlab/arith_tables.hpp"
#include "dmlab/rational.hpp"

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace dmlab {

enum class Relation { eq, ge, gt };

std::string to_string(Relation rel);

// How a step's value is obtained from earlier steps; `given` steps re-run their source.
enum class StepOp { given, linear, square, sqrt, max };

struct BoundStep {
    std::string label;  // the quantity, e.g. "int C^2 dmu"
    Relation rel = Relation::eq;
    double value = 0.0;
    std::optional<Rational> exact;
    std::string anchor;  // the identity or inequality that justifies the step

    StepOp op = StepOp::given;
    std::vector<std::size_t> args;
    std::vector<Rational> coefs;  // for linear: value = sum coefs[i] * args[i] + offset
    Rational offset = 0;
    std::function<Rational()> source;  // for given steps with exact values
    std::function<double()> source_real;  // for given steps without exact values

    // optional comparison against a printed reference number: value rel reference
    std::optional<double> reference;
    Relation reference_rel = Relation::ge;
};

struct BoundReport {
    std::string title;
    std::vector<BoundStep> steps;
    std::size_t final_step = 0;

    const BoundStep& final() const { return steps.at(final_step); }
    const BoundStep& find(const std::string& label) const;
};

struct ReplayResult {
    bool ok = true;
    double max_residual = 0.0;
    std::vector<std::string> failures;
};

// Re-evaluates every step from its inputs and checks stored values and reference comparisons.
ReplayResult replay(const BoundReport& report);

// Variance argument: C^2 = (|Z|^2 + Re Z^2)/2 combined with the Cauchy-Schwarz bound.
// Supports mollifiers with an empty or full flip window, and lambda_2.
BoundReport second_moment_chain(const MollifierSpec& spec, const Rational& alpha);

// Fourth moments: Re Z^4 = C^4 - 6 C^2 Im^2 + Im^4 with Jensen on C^4 and Im^4.
BoundReport fourth_moment_chain(const Rational& alpha);

// Lower bound for the tail of Z_1 A beyond T / log^2 T for the d_2 mollifier.
BoundReport tail_lower_bound_chain();

// (rho1^2 + |rho2 - rho1^2|) * mass
double general_lower_bound(double rho1, double rho2, double mass);
Rational general_lower_bound(const Rational& rho1, const Rational& rho2, const Rational& mass);

void render_markdown(std::ostream& out, const BoundReport& report);
void render_csv(std::ostream& out, const BoundReport& report, bool header = true);

}  // namespace dmlab
