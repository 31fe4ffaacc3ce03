#pragma once

// Workspace files (named groups, subgroups, amalgams, elements), built-in
// targets, and the JSON certificate schema with its recheck path.

#include <map>
#include <string>

#include <json.hpp>

#include "rsolv/residual.hpp"

namespace rsolv {

using Json = nlohmann::ordered_json;

struct Workspace {
  int format_version = 1;
  std::vector<std::pair<std::string, PcGroupPtr>> groups;
  std::vector<std::pair<std::string, PcSubgroup>> subgroups;
  std::vector<std::pair<std::string, AmalgamTarget>> amalgams;
  std::vector<std::tuple<std::string, std::string, std::string>> elements;  // name, target, word

  PcGroupPtr find_group(const std::string& name) const;
  const AmalgamTarget* find_amalgam(const std::string& name) const;

  static Workspace from_json(const Json& j);
  static Workspace load(const std::string& file_or_builtin);  // "builtin:..." or a path
  static Workspace builtin(const std::string& name);
  static std::vector<std::string> builtin_names();
};

Json presentation_to_json(const Presentation& p);
Presentation presentation_from_json(const Json& j, const std::string& name);

Json amalgam_to_json(const Amalgam& a);
AmalgamPtr amalgam_from_json(const Json& j);

Json convention_json();

// Certificate schema: { kind, strategy, target, chain: [...], kernel_facts,
// conclusion, convention, ... }.
Json witness_to_json(const SolvabilityWitness& w, const std::string& target);
Json trap_to_json(const TrapCertificate& t, const std::string& target);

struct RecheckResult {
  bool ok = true;
  std::vector<std::string> notes;
};
// Re-runs every verification recorded in a certificate against the
// workspace; reproduces the checks, never the search.
RecheckResult recheck_certificate(const Json& cert, const Workspace& ws);

}  // namespace rsolv
