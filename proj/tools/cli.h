// Copyright 2026 The dfsmem Authors
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

#ifndef DFSMEM_TOOLS_CLI_H
#define DFSMEM_TOOLS_CLI_H

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfsmem/fock.h"

namespace dfsmem::cli {

enum class Command {
    Entangle,
    Teleport,
    Read,
    RemoteTransfer,
    CurvesFig4a,
    CurvesFig4b,
    BsmStats,
    OracleCheck,
};

enum class Format { Csv, Json };

std::string to_string(Command c);
std::string to_string(Format f);

struct CliConfig {
    Command command = Command::Teleport;

    double pc = 0.01;
    Complex alpha = Complex(1.0 / std::numbers::sqrt2, 0.0);
    Complex beta = Complex(1.0 / std::numbers::sqrt2, 0.0);
    double chi = 1.0;
    double eta_d = 1.0;
    double p_dc = 0.0;
    double L0 = 0.0;
    double L_att = 22.0;
    double f_p = 1e7;

    std::int64_t trials = 10000;
    std::uint64_t seed = 0;
    int threads = 1;
    int truncation = 3;
    int n_max = 2;
    double retrieval = 1.0;

    double eta_prime = 1.0 / 3.0;
    double t_min = 5e-6;
    double t_max = 5e-5;
    int points = 100;
    double mark_t = 1.5e-5;
    std::vector<double> t_values{2e-5, 3e-5, 4e-5};
    double eta_min = 0.1;
    double eta_max = 1.0;

    std::string protocol = "write";
    double tolerance_sigmas = 3.0;
    std::optional<double> oracle_eta_d;

    std::string output;
    std::optional<Format> format;
    std::string trials_csv;

    bool operator==(const CliConfig &) const = default;

    Format effective_format() const;
    std::string effective_output() const;
};

/// Bad configuration. `field` names the offending flag or key.
class ConfigError : public std::runtime_error {
   public:
    ConfigError(std::string field, const std::string &message);
    const std::string &field() const {
        return field_;
    }

   private:
    std::string field_;
};

/// Raised by parse_config for --help; what() holds the usage text.
class HelpRequested : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Parses "re,im" or "amp@degrees".
Complex parse_complex(const std::string &text);
std::string format_complex(Complex z);

/// Arguments exclude the program name. `--config FILE` loads flat key=value
/// lines first; flags override them. DFS_SIM_SEED supplies the seed default.
CliConfig parse_config(const std::vector<std::string> &args);

/// Flag list that parses back to an equal config.
std::vector<std::string> render(const CliConfig &cfg);

/// Executes the command, writes the output file and prints one summary line.
/// Returns 0 on success, 1 on simulation failure, 2 on config error.
int run(const CliConfig &cfg, std::ostream &out, std::ostream &err);

/// parse_config + run with exit-code mapping for the executable.
int main_entry(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace dfsmem::cli

#endif
