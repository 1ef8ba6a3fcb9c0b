// Copyright 2026 The jcsub Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// jcsub: run sub-dynamics scenarios from a JSON config and/or flags.

#include "jcsub/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace jcsub;
    CLI::App app{"Jaynes-Cummings sub-dynamics: closed-form quasi-operators with a brute-force oracle"};
    app.set_version_flag("--version", std::string(cli::kSoftwareVersion));

    std::string config_path;
    cli::Overrides o;
    double omega = 0, omega0 = 0, g = 0, mag = 0, phase = 0, uu = 0, ud_re = 0, ud_im = 0, dd = 0;
    std::string n_max, oracle, format, output, id;
    std::vector<double> grid;
    std::vector<std::string> channels;
    bool list_channels = false;

    app.add_option("--config", config_path, "JSON scenario file")->check(CLI::ExistingFile);
    auto* f_omega = app.add_option("--omega", omega, "cavity frequency");
    auto* f_omega0 = app.add_option("--omega0", omega0, "atomic transition frequency");
    auto* f_g = app.add_option("--g", g, "coupling strength");
    auto* f_mag = app.add_option("--alpha-mag", mag, "coherent amplitude |alpha|");
    auto* f_phase = app.add_option("--alpha-phase", phase, "coherent phase arg(alpha)");
    auto* f_nmax = app.add_option("--n-max", n_max, "Fock cutoff or 'auto'");
    auto* f_uu = app.add_option("--uu", uu, "initial rho_uu");
    auto* f_udr = app.add_option("--ud-re", ud_re, "initial Re rho_ud");
    auto* f_udi = app.add_option("--ud-im", ud_im, "initial Im rho_ud");
    auto* f_dd = app.add_option("--dd", dd, "initial rho_dd");
    auto* f_grid = app.add_option("--grid", grid, "gt grid: start stop steps")->expected(3);
    auto* f_chan = app.add_option("--channels", channels, "observable channels")->delimiter(',');
    auto* f_oracle =
        app.add_option("--oracle", oracle, "run the brute-force oracle")->check(CLI::IsMember({"on", "off"}));
    auto* f_format =
        app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
    auto* f_out = app.add_option("--output", output, "output path ({id} expands per scenario)");
    auto* f_id = app.add_option("--id", id, "scenario id");
    app.add_flag("--list-channels", list_channels, "print the available channels and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kExitConfigInvalid;
    }

    if (list_channels) {
        for (const auto& c : analysis::closed_channel_names()) std::cout << c << "\n";
        for (const auto& c : analysis::oracle_channel_names()) std::cout << c << " (with --oracle on)\n";
        return cli::kExitOk;
    }

    if (*f_omega) o.omega = omega;
    if (*f_omega0) o.omega0 = omega0;
    if (*f_g) o.g = g;
    if (*f_mag) o.alpha_mag = mag;
    if (*f_phase) o.alpha_phase = phase;
    if (*f_nmax) o.n_max = n_max;
    if (*f_uu) o.uu = uu;
    if (*f_udr) o.ud_re = ud_re;
    if (*f_udi) o.ud_im = ud_im;
    if (*f_dd) o.dd = dd;
    if (*f_grid) o.grid = std::array<double, 3>{grid[0], grid[1], grid[2]};
    if (*f_chan) o.channels = channels;
    if (*f_oracle) o.oracle = (oracle == "on");
    if (*f_format) o.format = format;
    if (*f_out) o.path = output;
    if (*f_id) o.id = id;

    cli::RunConfig config;
    try {
        config = config_path.empty() ? cli::load_config("", o) : cli::load_config_file(config_path, o);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kExitConfigInvalid;
    }
    return cli::run(config, std::cerr);
}
