#include <limits>

#include "doctest.h"
#include "hazsearch/behavior.hpp"
#include "hazsearch/errors.hpp"
#include "support/expect.hpp"

using namespace hazsearch;
using testsupport::contains;
using testsupport::error_message;

namespace {

ParameterSpace motion_box() {
    ParameterSpace s;
    s.names = {"v", "x_p", "y_p"};
    s.lower = {0.5, -0.4, 0.1};
    s.upper = {2.0, 0.4, 0.5};
    s.nominal = {1.2, 0.0, 0.3};
    return s;
}

} // namespace

TEST_CASE("behavior: a well-formed box validates") {
    CHECK_NOTHROW(motion_box().validate());
    CHECK(motion_box().dims() == 3);
    CHECK(motion_box().width(0) == doctest::Approx(1.5));
}

TEST_CASE("behavior: box validation errors name the broken axis") {
    SUBCASE("bounds out of order") {
        ParameterSpace s = motion_box();
        s.lower[1] = 0.5;  // above the upper bound
        const std::string msg = error_message<ConfigError>([&] { s.validate(); });
        CHECK(contains(msg, "x_p"));
    }
    SUBCASE("nominal outside the box") {
        ParameterSpace s = motion_box();
        s.nominal[2] = 0.9;
        const std::string msg = error_message<ConfigError>([&] { s.validate(); });
        CHECK(contains(msg, "y_p"));
    }
    SUBCASE("size mismatch") {
        ParameterSpace s = motion_box();
        s.upper.pop_back();
        CHECK_THROWS_AS(s.validate(), ConfigError);
    }
    SUBCASE("non-finite bound") {
        ParameterSpace s = motion_box();
        s.upper[0] = std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(s.validate(), ConfigError);
    }
    SUBCASE("no axes at all") {
        ParameterSpace s;
        CHECK_THROWS_AS(s.validate(), ConfigError);
    }
}

TEST_CASE("behavior: membership and clamping") {
    const ParameterSpace s = motion_box();

    CHECK(s.contains({1.2, 0.0, 0.3}));
    CHECK(s.contains({0.5, -0.4, 0.1}));  // corners belong to the box
    CHECK(s.contains({2.0, 0.4, 0.5}));
    CHECK_FALSE(s.contains({2.1, 0.0, 0.3}));
    CHECK_FALSE(s.contains({1.0, 0.0, 0.09}));

    // a tolerance admits boundary-hugging floating point
    CHECK_FALSE(s.contains({2.0 + 1e-12, 0.0, 0.3}));
    CHECK(s.contains({2.0 + 1e-12, 0.0, 0.3}, 1e-9));

    const ParameterVector c = s.clamp({9.0, -9.0, 0.3});
    CHECK(c == ParameterVector{2.0, -0.4, 0.3});
    CHECK(s.clamp(s.nominal) == s.nominal);

    CHECK_THROWS_AS((void)s.clamp({1.0, 2.0}), UsageError);
    CHECK_FALSE(s.contains({1.0, 2.0}));  // wrong arity is simply not inside
}
