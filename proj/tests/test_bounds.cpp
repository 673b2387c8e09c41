#include "doctest.h"

#include "dmlab/bounds.hpp"
#include "dmlab/closed_forms.hpp"
#include "dmlab/errors.hpp"

#include <cmath>
#include <sstream>

using namespace dmlab;

namespace {

Rational q(std::int64_t p, std::int64_t d = 1) { return make_rational(p, d); }

Rational exact(const BoundReport& r, const std::string& label) {
    const auto& s = r.find(label);
    REQUIRE(s.exact);
    return *s.exact;
}

void check_replays(const BoundReport& r) {
    const auto res = replay(r);
    CHECK(res.ok);
    CHECK(res.failures.empty());
    CHECK(res.max_residual <= 1e-12);
}

}  // namespace

TEST_CASE("second moment chain, lambda") {
    const auto r = second_moment_chain(MollifierSpec::liouville(), 1);
    CHECK(exact(r, "int Z dmu") == q(2, 3));
    CHECK(exact(r, "int Z^2 dmu") == q(11, 30));
    CHECK(exact(r, "int |Z|^2 dmu") == q(17, 30));
    CHECK(exact(r, "int C^2 dmu") == q(7, 15));
    CHECK(exact(r, "int C^2 dmu") == q(11, 60) + q(17, 60));
    CHECK(exact(r, "int Im^2 dmu") == q(1, 10));
    CHECK(r.find("sup |C|").value == doctest::Approx(0.683130).epsilon(1e-6));
    CHECK(r.find("sup |C|").value == doctest::Approx(std::sqrt(7.0 / 15)).epsilon(1e-15));
    CHECK(r.final().label == "int C^2 dmu");
    check_replays(r);

    CHECK(exact(second_moment_chain(MollifierSpec::liouville(), 2), "int C^2 dmu") == q(7, 40));
}

TEST_CASE("second moment chain, d_2 mollifier") {
    const auto r = second_moment_chain(MollifierSpec::liouville_divisor(2), 1);
    CHECK(exact(r, "int C^2 dmu") == q(4, 9));
    CHECK(exact(r, "int Im^2 dmu") == q(17, 315));
    CHECK(exact(r, "int |Z|^2 dmu (via C^2 + Im^2)") == q(157, 315));
    CHECK(r.find("int Im^2 dmu").value > 0.0539);
    check_replays(r);
}

TEST_CASE("second moment chain, lambda_2") {
    const auto r = second_moment_chain(MollifierSpec::liouville_k(2), 1);
    CHECK(exact(r, "int Im^2 dmu") == q(7, 15));
    CHECK(exact(r, "int (Im^2 - C^2) dmu") == q(11, 30));
    check_replays(r);
}

TEST_CASE("chain properties") {
    Rational prev = 100;
    for (auto alpha : {q(1), q(3, 2), q(2)}) {
        const auto r = second_moment_chain(MollifierSpec::liouville(), alpha);
        const Rational c2 = exact(r, "int C^2 dmu");
        const Rational m1 = exact(r, "int Z dmu");
        CHECK(c2 >= m1 * m1);
        CHECK(c2 <= prev);
        prev = c2;
        check_replays(r);
    }
    CHECK_THROWS_AS(second_moment_chain(MollifierSpec::interval_flip(0.2, 0.5), 1), ValidationError);
}

TEST_CASE("fourth moment chain") {
    const auto r = fourth_moment_chain(1);
    CHECK(exact(r, "int C^4 dmu") == q(49, 225));
    CHECK(r.final().value >= 0.0276381);
    CHECK(r.final().value >= 0.02763);
    CHECK(*r.final().exact == (q(49, 225) + q(1, 100) - q(1405, 22680)) / 6);
    check_replays(r);
}

TEST_CASE("tail chain") {
    const auto r = tail_lower_bound_chain();
    CHECK(*r.final().exact == q(23, 630));
    CHECK(*r.final().exact == q(157, 315) - q(97, 210));
    CHECK(*r.final().exact > 0);
    const auto& printed = r.find("tail / (A_2 log^4 T) with the r^2 factor dropped");
    CHECK(*printed.exact == q(23, 2520));
    CHECK(printed.value > 0.009);
    check_replays(r);
}

TEST_CASE("replay catches tampering") {
    auto r = second_moment_chain(MollifierSpec::liouville(), 1);
    for (auto& s : r.steps)
        if (s.label == "int Im^2 dmu") {
            s.exact = q(1, 9);
            s.value = 1.0 / 9;
        }
    CHECK_FALSE(replay(r).ok);
}

TEST_CASE("general lower bound") {
    CHECK(general_lower_bound(q(2, 3), q(11, 30), q(1)) == q(47, 90));
    CHECK(general_lower_bound(2.0 / 3, 11.0 / 30, 1.0) == doctest::Approx(47.0 / 90));
    CHECK(general_lower_bound(q(1, 2), q(1, 4), q(3)) == q(3, 4));
    CHECK(general_lower_bound(q(1, 2), q(1), q(2)) == q(2));
    CHECK_THROWS_AS(general_lower_bound(0.5, 0.5, 0.0), ValidationError);
}

TEST_CASE("rendering") {
    const auto r = second_moment_chain(MollifierSpec::liouville(), 1);
    std::ostringstream md, csv;
    render_markdown(md, r);
    render_csv(csv, r);
    CHECK(md.str().find("7/15") != std::string::npos);
    CHECK(md.str().find("| # | quantity |") != std::string::npos);
    CHECK(csv.str().find("int C^2 dmu") != std::string::npos);
    std::size_t lines = 0;
    for (char c : csv.str()) lines += c == '\n';
    CHECK(lines == r.steps.size() + 1);
}
