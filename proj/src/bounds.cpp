#include "dmlab/bounds.hpp"

#include "dmlab/closed_forms.hpp"
#include "dmlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace dmlab {

std::string to_string(Relation rel) {
    switch (rel) {
        case Relation::eq: return "=";
        case Relation::ge: return ">=";
        case Relation::gt: return ">";
    }
    return "?";
}

const BoundStep& BoundReport::find(const std::string& label) const {
    for (const auto& s : steps)
        if (s.label == label) return s;
    throw ValidationError("no step labelled '" + label + "' in " + title);
}

namespace {

class ChainBuilder {
public:
    explicit ChainBuilder(std::string title) { report_.title = std::move(title); }

    std::size_t given(std::string label, Relation rel, std::function<Rational()> source,
                      std::string anchor) {
        BoundStep s;
        s.label = std::move(label);
        s.rel = rel;
        s.anchor = std::move(anchor);
        s.exact = source();
        s.value = to_double(*s.exact);
        s.source = std::move(source);
        return push(std::move(s));
    }

    std::size_t linear(std::string label, Relation rel, std::vector<std::size_t> args,
                       std::vector<Rational> coefs, std::string anchor, Rational offset = 0) {
        BoundStep s;
        s.label = std::move(label);
        s.rel = rel;
        s.anchor = std::move(anchor);
        s.op = StepOp::linear;
        s.args = std::move(args);
        s.coefs = std::move(coefs);
        s.offset = std::move(offset);
        return push(std::move(s));
    }

    std::size_t unary(std::string label, Relation rel, StepOp op, std::size_t arg,
                      std::string anchor) {
        BoundStep s;
        s.label = std::move(label);
        s.rel = rel;
        s.anchor = std::move(anchor);
        s.op = op;
        s.args = {arg};
        return push(std::move(s));
    }

    std::size_t maximum(std::string label, Relation rel, std::vector<std::size_t> args,
                        std::string anchor) {
        BoundStep s;
        s.label = std::move(label);
        s.rel = rel;
        s.anchor = std::move(anchor);
        s.op = StepOp::max;
        s.args = std::move(args);
        return push(std::move(s));
    }

    void reference(std::size_t step, double value, Relation rel) {
        report_.steps[step].reference = value;
        report_.steps[step].reference_rel = rel;
    }

    BoundReport finish(std::size_t final_step) {
        report_.final_step = final_step;
        return std::move(report_);
    }

    const BoundStep& step(std::size_t i) const { return report_.steps[i]; }

private:
    std::size_t push(BoundStep s) {
        report_.steps.push_back(std::move(s));
        const std::size_t i = report_.steps.size() - 1;
        evaluate(report_.steps, i, report_.steps[i].exact, report_.steps[i].value);
        return i;
    }

    BoundReport report_;

public:
    // Computes step i from its inputs; used both when building and when replaying.
    static void evaluate(const std::vector<BoundStep>& steps, std::size_t i,
                         std::optional<Rational>& exact, double& value) {
        const BoundStep& s = steps[i];
        for (std::size_t a : s.args)
            if (a >= i) throw ValidationError("bound step refers forward: " + s.label);
        switch (s.op) {
            case StepOp::given:
                if (s.source) {
                    exact = s.source();
                    value = to_double(*exact);
                } else if (s.source_real) {
                    exact.reset();
                    value = s.source_real();
                }
                return;
            case StepOp::linear: {
                bool all_exact = true;
                for (std::size_t a : s.args) all_exact = all_exact && steps[a].exact.has_value();
                if (all_exact) {
                    Rational q = s.offset;
                    for (std::size_t j = 0; j < s.args.size(); ++j) q += s.coefs[j] * *steps[s.args[j]].exact;
                    exact = q;
                    value = to_double(q);
                } else {
                    double v = to_double(s.offset);
                    for (std::size_t j = 0; j < s.args.size(); ++j)
                        v += to_double(s.coefs[j]) * steps[s.args[j]].value;
                    exact.reset();
                    value = v;
                }
                return;
            }
            case StepOp::square: {
                const BoundStep& a = steps[s.args[0]];
                if (a.exact) {
                    exact = *a.exact * *a.exact;
                    value = to_double(*exact);
                } else {
                    exact.reset();
                    value = a.value * a.value;
                }
                return;
            }
            case StepOp::sqrt:
                exact.reset();
                value = std::sqrt(steps[s.args[0]].value);
                return;
            case StepOp::max: {
                std::size_t best = s.args[0];
                for (std::size_t a : s.args)
                    if (steps[a].value > steps[best].value) best = a;
                exact = steps[best].exact;
                value = steps[best].value;
                return;
            }
        }
    }
};

bool holds(double lhs, Relation rel, double rhs) {
    switch (rel) {
        case Relation::eq: return std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs));
        case Relation::ge: return lhs >= rhs;
        case Relation::gt: return lhs > rhs;
    }
    return false;
}

std::string fmt(const BoundStep& s) {
    if (s.exact) return format_rational(*s.exact);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", s.value);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

struct TrivialWindowSpec {
    unsigned r;
    unsigned eta;
    double beta1;
    double beta2;
};

TrivialWindowSpec trivial_window(const MollifierSpec& spec) {
    const auto [b1, b2] = spec.flip_window();
    const bool empty = b2 <= std::max(b1, 0.0) || b1 >= 1.0;
    const bool full = b1 <= 0.0 && b2 >= 1.0;
    if (!empty && !full)
        throw ValidationError("second_moment_chain: no closed-form mean square for flip window of " +
                              spec.name());
    return {spec.r, spec.eta, 0.0, empty ? 0.0 : 1.0};
}

BoundReport lambda2_chain(const Rational& alpha) {
    ChainBuilder b("second moment, lambda_2, alpha = " + rational_text(alpha));
    const auto m2 = b.given("int Z^2 dmu", Relation::eq,
                            [alpha] { return lambda2_even_moment(1, alpha); },
                            "lambda_2 even moments are (-1)^k times the lambda moments");
    const auto re = b.linear("int (Z^2 + conj Z^2)/4 dmu", Relation::eq, {m2}, {Rational(1, 2)},
                             "real part of the pseudo-moment");
    const auto ms = b.given("int |Z|^2 dmu", Relation::ge,
                            [alpha] { return mean_square_closed(alpha, 1, 0); },
                            "diagonal mean square, same |b(n)|^2 as for lambda");
    const auto half = b.linear("int |Z|^2/2 dmu", Relation::ge, {ms}, {Rational(1, 2)},
                               "halved mean square");
    b.linear("int C^2 dmu", Relation::ge, {half, re}, {1, 1},
             "C^2 = |Z|^2/2 + (Z^2 + conj Z^2)/4");
    const auto im = b.linear("int Im^2 dmu", Relation::ge, {half, re}, {1, -1},
                             "Im^2 = |Z|^2/2 - (Z^2 + conj Z^2)/4");
    b.linear("int (Im^2 - C^2) dmu", Relation::eq, {m2}, {-1}, "Im^2 - C^2 = -Re Z^2");
    return b.finish(im);
}

}  // namespace

ReplayResult replay(const BoundReport& report) {
    ReplayResult res;
    for (std::size_t i = 0; i < report.steps.size(); ++i) {
        const BoundStep& s = report.steps[i];
        std::optional<Rational> exact;
        double value = 0.0;
        try {
            ChainBuilder::evaluate(report.steps, i, exact, value);
        } catch (const std::exception& e) {
            res.ok = false;
            res.failures.push_back(s.label + ": " + e.what());
            continue;
        }
        if (exact.has_value() != s.exact.has_value() || (exact && *exact != *s.exact)) {
            res.ok = false;
            res.failures.push_back(s.label + ": exact value does not replay");
        }
        const double resid = std::abs(value - s.value) / std::max(1.0, std::abs(s.value));
        res.max_residual = std::max(res.max_residual, resid);
        if (resid > 1e-12) {
            res.ok = false;
            res.failures.push_back(s.label + ": value does not replay");
        }
        if (s.reference && !holds(s.value, s.reference_rel, *s.reference)) {
            res.ok = false;
            res.failures.push_back(s.label + ": fails " + to_string(s.reference_rel) + " reference");
        }
    }
    return res;
}

BoundReport second_moment_chain(const MollifierSpec& spec, const Rational& alpha) {
    if (spec.kind == MollifierKind::liouville_k && spec.k == 2) return lambda2_chain(alpha);
    const TrivialWindowSpec w = trivial_window(spec);
    auto moment = [w, alpha](unsigned k) {
        SimplexIntegrand si;
        si.k = k;
        si.r = w.r;
        si.eta = w.eta;
        si.alpha = alpha;
        si.beta1 = w.beta1;
        si.beta2 = w.beta2;
        return *simplex_moment(si).exact;
    };

    ChainBuilder b("second moment, " + spec.name() + ", alpha = " + rational_text(alpha));
    const auto m1 = b.given("int Z dmu", Relation::eq, [moment] { return moment(1); },
                            "first pseudo-moment");
    const auto m2 = b.given("int Z^2 dmu", Relation::eq, [moment] { return moment(2); },
                            "second pseudo-moment");
    const auto ms = b.given("int |Z|^2 dmu", Relation::ge,
                            [w, alpha] { return mean_square_closed(alpha, w.r, w.eta); },
                            "diagonal part of the mean square");
    const auto re = b.linear("int (Z^2 + conj Z^2)/4 dmu", Relation::eq, {m2}, {Rational(1, 2)},
                             "real part of the pseudo-moment");
    const auto half = b.linear("int |Z|^2/2 dmu", Relation::ge, {ms}, {Rational(1, 2)},
                               "halved mean square");
    const auto var = b.linear("variance bound on int C^2 dmu", Relation::ge, {re, half}, {1, 1},
                              "C^2 = |Z|^2/2 + (Z^2 + conj Z^2)/4");
    const auto cs = b.unary("Cauchy-Schwarz bound on int C^2 dmu", Relation::ge, StepOp::square,
                            m1, "int C^2 dmu >= (int C dmu)^2");
    const auto c2 = b.maximum("int C^2 dmu", Relation::ge, {var, cs}, "larger of the two bounds");
    const auto im = b.linear("int Im^2 dmu", Relation::ge, {c2, m2}, {1, -1},
                             "Im^2 = C^2 - Re Z^2");
    b.linear("int |Z|^2 dmu (via C^2 + Im^2)", Relation::ge, {c2, im}, {1, 1},
             "|Z|^2 = C^2 + Im^2");
    b.unary("sup |C|", Relation::ge, StepOp::sqrt, c2, "sup |C| >= sqrt(int C^2 dmu)");
    return b.finish(c2);
}

BoundReport fourth_moment_chain(const Rational& alpha) {
    const BoundReport second = second_moment_chain(MollifierSpec::liouville(), alpha);
    const Rational im2 = *second.find("int Im^2 dmu").exact;
    if (im2 < 0) throw ValidationError("fourth_moment_chain: no positive Im^2 bound at this alpha");

    ChainBuilder b("fourth moment, lambda, alpha = " + rational_text(alpha));
    const auto sc = b.given("int C^2 dmu", Relation::ge, [alpha] {
        return *second_moment_chain(MollifierSpec::liouville(), alpha).find("int C^2 dmu").exact;
    }, "second moment chain");
    const auto si = b.given("int Im^2 dmu", Relation::ge, [alpha] {
        return *second_moment_chain(MollifierSpec::liouville(), alpha).find("int Im^2 dmu").exact;
    }, "second moment chain");
    const auto c4 = b.unary("int C^4 dmu", Relation::ge, StepOp::square, sc,
                            "Jensen: int C^4 >= (int C^2)^2");
    const auto i4 = b.unary("int Im^4 dmu", Relation::ge, StepOp::square, si,
                            "Jensen: int Im^4 >= (int Im^2)^2");
    const auto m4 = b.given("int Z^4 dmu", Relation::eq,
                            [alpha] { return exact_pseudo_moment(4, alpha); },
                            "fourth pseudo-moment");
    const auto six = b.linear("6 int C^2 Im^2 dmu", Relation::ge, {c4, i4, m4}, {1, 1, -1},
                              "Re Z^4 = C^4 - 6 C^2 Im^2 + Im^4");
    const auto fin = b.linear("int C^2 Im^2 dmu", Relation::ge, {six}, {Rational(1, 6)},
                              "divide by 6");
    if (alpha == 1) b.reference(fin, 0.02763, Relation::ge);
    return b.finish(fin);
}

BoundReport tail_lower_bound_chain() {
    ChainBuilder b("tail mean square, d_2 mollifier, alpha = 1");
    const auto full = b.given("int |Z|^2 dmu", Relation::ge, [] {
        return *second_moment_chain(MollifierSpec::liouville_divisor(2), 1)
                    .find("int |Z|^2 dmu (via C^2 + Im^2)")
                    .exact;
    }, "second moment chain for the d_2 mollifier");
    const auto head = b.given("head mean square (n < T/log^2 T)", Relation::eq,
                              [] { return mean_square_closed(1, 2, 0); },
                              "diagonal mean square of the head");
    const auto tail = b.linear("tail / (A_2 log^4 T)", Relation::ge, {full, head}, {1, -1},
                               "full minus head, normalized by sum d_2(n)^2/n");
    b.reference(tail, 0.0, Relation::gt);
    const auto printed = b.linear("tail / (A_2 log^4 T) with the r^2 factor dropped", Relation::ge,
                                  {tail}, {Rational(1, 4)},
                                  "normalizing by A_2 log^4 T int v^3 dv undercounts the mass by r^2 = 4");
    b.reference(printed, 0.009, Relation::gt);
    return b.finish(tail);
}

double general_lower_bound(double rho1, double rho2, double mass) {
    if (!(mass > 0.0)) throw ValidationError("general_lower_bound needs positive mass");
    const double sq = rho1 * rho1;
    return (sq + std::abs(rho2 - sq)) * mass;
}

Rational general_lower_bound(const Rational& rho1, const Rational& rho2, const Rational& mass) {
    if (mass <= 0) throw ValidationError("general_lower_bound needs positive mass");
    const Rational sq = rho1 * rho1;
    const Rational sigma = rho2 - sq;
    return (sq + (sigma < 0 ? Rational(-sigma) : sigma)) * mass;
}

void render_markdown(std::ostream& out, const BoundReport& report) {
    out << "### " << report.title << "\n\n| # | quantity | rel | value | reason |\n|---|---|---|---|---|\n";
    for (std::size_t i = 0; i < report.steps.size(); ++i) {
        const BoundStep& s = report.steps[i];
        out << "| " << i << " | " << s.label << " | " << to_string(s.rel) << " | " << fmt(s);
        if (s.reference) out << " (" << to_string(s.reference_rel) << ' ' << *s.reference << ')';
        out << " | " << s.anchor << " |\n";
    }
    out << "\nfinal: " << report.final().label << ' ' << to_string(report.final().rel) << ' '
        << fmt(report.final()) << "\n";
}

void render_csv(std::ostream& out, const BoundReport& report, bool header) {
    if (header) out << "chain,step,quantity,relation,exact,value,reference,anchor\n";
    char buf[64];
    for (std::size_t i = 0; i < report.steps.size(); ++i) {
        const BoundStep& s = report.steps[i];
        std::snprintf(buf, sizeof buf, "%.15g", s.value);
        const std::string exact = s.exact ? rational_text(*s.exact) : "";
        std::string ref;
        if (s.reference) {
            std::ostringstream r;
            r << to_string(s.reference_rel) << ' ' << *s.reference;
            ref = r.str();
        }
        out << csv_quote(report.title) << ',' << i << ',' << csv_quote(s.label) << ','
            << to_string(s.rel) << ',' << exact << ',' << buf << ',' << csv_quote(ref) << ','
            << csv_quote(s.anchor) << '\n';
    }
}

}  // namespace dmlab
