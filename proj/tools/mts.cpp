// Copyright 2026 The mts Authors
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


#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mts/cli.hpp"

int main(int argc, char** argv) {
  using namespace mts::cli;
  CLI::App app{"Extremal unital channels: construct, certify, search"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("mts format ") + mts::io::kFormatVersion);

  ConstructOptions construct;
  auto* c = app.add_subcommand("construct", "Write a Kraus file for a named family");
  c->add_option("family", construct.family, "n3|n4|general|diagonal|mixture|unitary")
      ->required()
      ->check(CLI::IsMember(construct_families()));
  c->add_option("--n", construct.n, "Matrix size");
  c->add_option("--a", construct.a, "Number of diagonal Kraus operators");
  c->add_option("--k", construct.k, "Number of unitaries in a mixture");
  c->add_option("--seed", construct.seed, "Seed for random families");
  c->add_option("--weights", construct.weights, "Mixture weights")->delimiter(',');
  c->add_option("-o,--out", construct.out_path, "Output file (default stdout)");

  CertifyOptions certify;
  std::optional<double> tol_flag;
  bool ps_on = false, ps_off = false;
  auto* cert = app.add_subcommand("certify", "Check a Kraus or density file for extremality");
  cert->add_option("input", certify.in_path, "Kraus or density JSON file")->required();
  auto* ps_flag = cert->add_flag("--ps", ps_on, "Always run the support test");
  cert->add_flag("--no-ps", ps_off, "Skip the support test")->excludes(ps_flag);
  cert->add_option("--tol", tol_flag, "Relative rank tolerance");
  cert->add_flag("--json", certify.json, "Print the certificate as JSON");
  cert->add_option("-o,--out", certify.out_path, "Also write the certificate JSON here");

  SearchOptions search;
  auto* srch = app.add_subcommand("search", "Random search for high-rank extremal maps");
  srch->add_option("--n", search.n, "Matrix size")->required();
  srch->add_option("--target-rank", search.target_rank, "Exit 1 unless reached");
  srch->add_option("--trials", search.trials, "Number of samples");
  srch->add_option("--seed", search.seed, "Base seed");
  srch->add_option("--strategy", search.strategy, "diagonal|perturbation")
      ->check(CLI::IsMember({"diagonal", "perturbation"}));
  srch->add_option("--threads", search.threads, "Worker threads (0 = all cores)");
  srch->add_option("--tol", tol_flag, "Relative rank tolerance");
  srch->add_flag("--json", search.json, "Print the report as JSON");

  std::string roundtrip_in;
  auto* rt = app.add_subcommand("roundtrip", "Channel/state bijection check");
  rt->add_option("input", roundtrip_in, "Kraus or density JSON file")->required();
  rt->add_option("--tol", tol_flag, "Relative rank tolerance");

  long long bound_n = 0;
  bool bound_json = false;
  auto* bd = app.add_subcommand("bound", "Known bounds on the maximal extremal rank");
  bd->add_option("--n", bound_n, "Matrix size")->required();
  bd->add_flag("--json", bound_json, "Print as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code::usage;
  }

  const Streams streams{std::cout, std::cerr};
  try {
    if (*c) return cmd_construct(construct, streams);
    if (*bd) return cmd_bound(bound_n, bound_json, streams);

    const mts::Tolerances tol = resolve_tolerances(tol_flag);
    if (*cert) {
      if (ps_on) certify.ps = true;
      if (ps_off) certify.ps = false;
      return cmd_certify(certify, tol, streams);
    }
    if (*srch) return cmd_search(search, tol, streams);
    if (*rt) return cmd_roundtrip(roundtrip_in, tol, streams);
  } catch (const usage_error& e) {
    std::cerr << "mts: " << e.what() << "\n";
    return exit_code::usage;
  } catch (const std::exception& e) {
    std::cerr << "mts: " << e.what() << "\n";
    return exit_code::io;
  }
  return exit_code::usage;
}
