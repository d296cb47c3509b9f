#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "scdl/diagnostic.hpp"

namespace scdl {

/// One reference model: its name, root file (relative to the manifest's
/// directory) and the diagnostic codes `check` must report, in order.
struct ManifestEntry {
    std::string name;
    std::string root;
    std::vector<std::string> expectedCodes;
};

/// Reads `name root codes` lines; codes are comma separated or `-` for a
/// clean model. `#` starts a comment line. Malformed lines are E-PAR-008.
Outcome<std::vector<ManifestEntry>> parse_manifest(std::string_view text, const std::string& file);

}  // namespace scdl
