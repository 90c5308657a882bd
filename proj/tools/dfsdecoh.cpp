// Copyright 2026 The dfsdecoh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dfsdecoh/commands.hpp"
#include "dfsdecoh/version.hpp"

namespace {

void add_common(CLI::App *sub, dfsdecoh::cli::RunConfig &c) {
    sub->add_option("--seed", c.seed, "Top-level random seed");
    sub->add_option("--out", c.out, "Output file (stdout if omitted)");
    sub->add_option("--times", c.times, "Time grid start:stop:steps (inclusive, steps intervals)");
    sub->add_option("--threads", c.threads, "Worker threads for Monte Carlo (0 = all cores)");
}

}  // namespace

int main(int argc, char **argv) {
    dfsdecoh::cli::RunConfig c;
    CLI::App app{"Two-ion decoherence simulator and decay-shape discriminator", "dfsdecoh"};
    app.set_version_flag("--version", dfsdecoh::kVersion);
    app.require_subcommand(1);

    for (const char *name : {"fit", "discriminate"}) {
        auto *sub = app.add_subcommand(name, "Fit exponential and Gaussian decay to ln V and pick the better one");
        add_common(sub, c);
        sub->add_option("input,--input", c.input, "CSV with header time,visibility[,visibility_err]")->required();
        sub->add_option("--tie-threshold", c.tie_threshold, "Relative asd margin below which the verdict is Tie");
    }

    auto *field = app.add_subcommand("simulate-field", "Coherence decay under quasi-static field noise");
    add_common(field, c);
    field->add_option("--dist", c.dist, "gaussian | lorentzian | empirical")
        ->check(CLI::IsMember({"gaussian", "lorentzian", "empirical"}));
    field->add_option("--center", c.center, "Distribution center (rad/time)");
    field->add_option("--sigma", c.sigma, "Gaussian standard deviation (rad/time)");
    field->add_option("--gamma", c.gamma, "Lorentzian half width at half maximum (rad/time)");
    field->add_option("--samples", c.samples, "Empirical frequencies, comma separated")->delimiter(',');
    field->add_option("--state", c.state, "dfs | test | both")->check(CLI::IsMember({"dfs", "test", "both"}));
    field->add_option("--method", c.method, "analytic | quadrature | mc")
        ->check(CLI::IsMember({"analytic", "quadrature", "mc"}));
    field->add_option("--n", c.n, "Monte Carlo samples");
    field->add_option("--quad-points", c.quad_points, "Quadrature grid points");
    field->add_option("--curve-out", c.curve_out, "Write <prefix>_dfs.csv / <prefix>_test.csv");

    auto *reservoir = app.add_subcommand("simulate-reservoir", "Coherence decay under a randomized dispersive laser");
    add_common(reservoir, c);
    reservoir->add_option("--g", c.g, "Dipole coupling g (rad/time)");
    reservoir->add_option("--omega", c.omega, "Ion splitting omega (rad/time)");
    reservoir->add_option("--omega-f", c.omega_f, "Field frequency omega_f (rad/time)");
    reservoir->add_option("--n-mean", c.n_mean, "Mean photon number");
    reservoir->add_option("--n-std", c.n_std, "Per-step photon-number standard deviation");
    reservoir->add_option("--dt", c.dt, "Intensity step duration");
    reservoir->add_option("--n-traj", c.n_traj, "Number of trajectories");
    reservoir->add_option("--curve-out", c.curve_out, "Write <prefix>_dfs.csv and <prefix>_test.csv");

    auto *generate = app.add_subcommand("generate", "Write a synthetic visibility dataset");
    add_common(generate, c);
    generate->add_option("--family", c.family, "exponential | gaussian")
        ->check(CLI::IsMember({"exponential", "gaussian"}));
    generate->add_option("--intercept", c.intercept, "b (exponential) or B (gaussian)");
    generate->add_option("--coef", c.coef, "a (exponential) or A (gaussian)");
    generate->add_option("--noise", c.noise, "Standard deviation of additive noise on ln V");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : dfsdecoh::cli::kExitData;
    }
    c.command = app.get_subcommands().front()->get_name();
    return dfsdecoh::cli::run_command(c, std::cout, std::cerr);
}
