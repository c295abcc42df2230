#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fetc/error_dynamics.hpp"

using Catch::Matchers::WithinAbs;
using namespace fetc;

namespace {

// Independent oracle for the closed form: classic RK4 on the rate law.
double integrate_rate(double eps0, double t_end, const FetcParams& p, double dt) {
    double eps = eps0;
    double t = 0.0;
    while (t < t_end - 0.5 * dt) {
        const double k1 = fetc_rate(eps, t, p);
        const double k2 = fetc_rate(eps + 0.5 * dt * k1, t + 0.5 * dt, p);
        const double k3 = fetc_rate(eps + 0.5 * dt * k2, t + 0.5 * dt, p);
        const double k4 = fetc_rate(eps + dt * k3, t + dt, p);
        eps += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += dt;
    }
    return eps;
}

} // namespace

TEST_CASE("rate law") {
    const FetcParams p{4.0, 40.0};
    SECTION("zero error gives zero rate") {
        REQUIRE(fetc_rate(0.0, 0.0, p) == 0.0);
        REQUIRE(fetc_rate(0.0, 39.0, p) == 0.0);
    }
    SECTION("value at the start of the nominal profile") {
        REQUIRE_THAT(fetc_rate(3.0, 0.0, p), WithinAbs(-0.09502129316321362, 1e-13));
    }
    SECTION("holds at zero after the convergence time") {
        REQUIRE(fetc_rate(3.0, 50.0, p) == 0.0);
        REQUIRE(fetc_rate(-2.0, 40.0 + 1e-6, p) == 0.0);
    }
    SECTION("singular instant reports a convergence miss") {
        bool miss = false;
        REQUIRE(fetc_rate(0.5, 40.0, p, &miss) == 0.0);
        REQUIRE(miss);
        miss = true;
        REQUIRE(fetc_rate(0.5, 10.0, p, &miss) != 0.0);
        REQUIRE_FALSE(miss);
    }
}

TEST_CASE("closed form") {
    const FetcParams p{4.0, 40.0};
    SECTION("exact zero at the convergence time") {
        REQUIRE(fetc_closed_form(3.0, 0.0, 40.0, p) == 0.0);
        REQUIRE(fetc_closed_form(-7.0, 0.0, 40.0, p) == 0.0);
        REQUIRE(fetc_closed_form(9.0, 0.0, 40.0, FetcParams{1.0, 40.0}) == 0.0);
    }
    SECTION("initial condition is reproduced") {
        REQUIRE_THAT(fetc_closed_form(3.0, 0.0, 0.0, p), WithinAbs(3.0, 1e-12));
        REQUIRE_THAT(fetc_closed_form(-4.0, 2.0, 2.0, p), WithinAbs(-4.0, 1e-12));
    }
    SECTION("midpoint of the nominal profile") {
        REQUIRE_THAT(fetc_closed_form(3.0, 0.0, 20.0, p),
                     WithinAbs(0.7852002698442431, 1e-12));
    }
    SECTION("out of domain") {
        REQUIRE_THROWS_AS(fetc_closed_form(3.0, 0.0, 41.0, p), DomainError);
        REQUIRE_THROWS_AS(fetc_closed_form(3.0, 40.0, 40.0, p), DomainError);
    }
}

TEST_CASE("closed-form rate") {
    const FetcParams p{4.0, 40.0};
    SECTION("zero at the convergence time for gain above 1") {
        REQUIRE(fetc_closed_form_rate(3.0, 0.0, 40.0, p) == 0.0);
    }
    SECTION("zero initial error stays at rest") {
        REQUIRE(fetc_closed_form_rate(0.0, 0.0, 17.0, p) == 0.0);
    }
    SECTION("matches the rate law along the solution") {
        REQUIRE_THAT(fetc_closed_form_rate(3.0, 0.0, 0.0, p),
                     WithinAbs(-0.09502129316321362, 1e-13));
        for (double t : {0.0, 5.0, 17.0, 29.0, 39.0}) {
            const double eps = fetc_closed_form(3.0, 0.0, t, p);
            REQUIRE_THAT(fetc_closed_form_rate(3.0, 0.0, t, p),
                         WithinAbs(fetc_rate(eps, t, p), 1e-12));
        }
    }
}

TEST_CASE("closed form agrees with the integrated rate law") {
    for (double eps0 : {-3.0, 3.0}) {
        for (double gain : {1.0, 4.0}) {
            const FetcParams p{gain, 20.0};
            double worst = 0.0;
            double eps = eps0;
            double t = 0.0;
            const double dt = 1e-4;
            while (t < 20.0 - 0.01 - 0.5 * dt) {
                const double k1 = fetc_rate(eps, t, p);
                const double k2 = fetc_rate(eps + 0.5 * dt * k1, t + 0.5 * dt, p);
                const double k3 = fetc_rate(eps + 0.5 * dt * k2, t + 0.5 * dt, p);
                const double k4 = fetc_rate(eps + dt * k3, t + dt, p);
                eps += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                t += dt;
                worst = std::max(worst, std::abs(eps - fetc_closed_form(eps0, 0.0, t, p)));
            }
            REQUIRE(worst <= 1e-6);
        }
    }
}

TEST_CASE("error magnitude never grows under the rate law") {
    for (double eps0 : {-10.0, -6.0, -3.0, -1.0, 0.5, 3.0, 7.0, 10.0}) {
        for (double gain : {1.0, 4.0}) {
            const FetcParams p{gain, 20.0};
            const double dt = 1e-4;
            double eps = eps0;
            double t = 0.0;
            while (t < 20.0 - 0.5 * dt) {
                const double k1 = fetc_rate(eps, t, p);
                const double k2 = fetc_rate(eps + 0.5 * dt * k1, t + 0.5 * dt, p);
                const double k3 = fetc_rate(eps + 0.5 * dt * k2, t + 0.5 * dt, p);
                const double k4 = fetc_rate(eps + dt * k3, t + dt, p);
                const double next = eps + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                REQUIRE(std::abs(next) <= std::abs(eps) + 1e-12);
                eps = next;
                t += dt;
            }
        }
    }
}

TEST_CASE("reaching profile") {
    SECTION("zero initial error gives the all-zero profile") {
        const ReachingProfile prof = reaching_profile(0.0, 0.0, FetcParams{4.0, 40.0}, 1.0);
        for (std::size_t i = 0; i < prof.times.size(); ++i) {
            REQUIRE(prof.eps[i] == 0.0);
            REQUIRE(prof.eps_rate[i] == 0.0);
        }
    }
    SECTION("final sample lands exactly on the convergence time") {
        const ReachingProfile prof = reaching_profile(3.0, 0.0, FetcParams{4.0, 20.0}, 7.0);
        REQUIRE(prof.times.size() == 4);
        REQUIRE(prof.times.back() == 20.0);
        REQUIRE(prof.eps.back() == 0.0);
    }
    SECTION("nominal profile decreases strictly to zero") {
        const ReachingProfile prof = reaching_profile(3.0, 0.0, FetcParams{4.0, 40.0}, 0.01);
        REQUIRE(prof.times.back() == 40.0);
        REQUIRE(prof.eps.front() == 3.0);
        for (std::size_t i = 1; i < prof.eps.size(); ++i) {
            REQUIRE(prof.eps[i] < prof.eps[i - 1]);
        }
        REQUIRE(prof.eps.back() == 0.0);
    }
    SECTION("larger gain converges pointwise faster") {
        const ReachingProfile slow = reaching_profile(3.0, 0.0, FetcParams{2.0, 40.0}, 0.5);
        const ReachingProfile fast = reaching_profile(3.0, 0.0, FetcParams{4.0, 40.0}, 0.5);
        REQUIRE(slow.times.size() == fast.times.size());
        for (std::size_t i = 1; i + 1 < slow.times.size(); ++i) {
            REQUIRE(fast.eps[i] < slow.eps[i]);
        }
    }
    SECTION("rejects a non-positive step") {
        REQUIRE_THROWS_AS(reaching_profile(3.0, 0.0, FetcParams{4.0, 40.0}, 0.0),
                          ParameterError);
    }
}

TEST_CASE("gain ordering holds for either error sign") {
    const double gains[] = {1.0, 2.0, 4.0, 8.0};
    for (double eps0 : {-3.0, 0.5, 3.0, 9.0}) {
        for (std::size_t i = 1; i < 4; ++i) {
            const FetcParams lo{gains[i - 1], 40.0};
            const FetcParams hi{gains[i], 40.0};
            for (double t : {1.0, 10.0, 20.0, 35.0}) {
                REQUIRE(std::abs(fetc_closed_form(eps0, 0.0, t, hi)) <
                        std::abs(fetc_closed_form(eps0, 0.0, t, lo)));
            }
        }
    }
}

TEST_CASE("convergence instant is the set time, not earlier") {
    // Sampled at the plotting granularity the zero crossing shows up exactly
    // at T_s for the moderate gains the profiles use.
    for (double gain : {2.0, 3.0, 4.0}) {
        for (double ts : {20.0, 40.0}) {
            for (double eps0 : {-10.0, -3.0, -1.0, 0.1, 0.5, 3.0, 9.0, 10.0}) {
                const ReachingProfile prof =
                    reaching_profile(eps0, 0.0, FetcParams{gain, ts}, 1.0);
                for (std::size_t i = 0; i + 1 < prof.times.size(); ++i) {
                    REQUIRE(std::abs(prof.eps[i]) >= 1e-9);
                }
                REQUIRE(std::abs(prof.eps.back()) < 1e-9);
                REQUIRE(prof.times.back() == ts);
            }
        }
    }
    // Independent of gain entirely when "zero" means exact floating zero.
    for (double gain : {1.0, 2.0, 4.0, 8.0}) {
        const FetcParams p{gain, 40.0};
        REQUIRE(fetc_closed_form(3.0, 0.0, 39.99, p) > 0.0);
        REQUIRE(fetc_closed_form(3.0, 0.0, 40.0, p) == 0.0);
    }
}

TEST_CASE("oracle integration is consistent near the convergence time") {
    // The guarded rate law still lands within integration tolerance of zero.
    const FetcParams p{4.0, 20.0};
    const double end = integrate_rate(3.0, 20.0, p, 1e-4);
    REQUIRE_THAT(end, WithinAbs(0.0, 1e-6));
}
