#include "scdl/corpus.hpp"

#include <sstream>

namespace scdl {

Outcome<std::vector<ManifestEntry>> parse_manifest(std::string_view text, const std::string& file) {
    Outcome<std::vector<ManifestEntry>> out;
    std::vector<ManifestEntry> entries;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream fields(line);
        ManifestEntry entry;
        std::string codes, extra;
        if (!(fields >> entry.name) || entry.name.front() == '#') continue;
        if (!(fields >> entry.root >> codes) || (fields >> extra)) {
            out.diagnostics.push_back(make_error("E-PAR-008", "manifest line needs exactly: name root codes",
                                                 SourceSpan{file, lineNo, 1, lineNo, 1}));
            continue;
        }
        if (codes != "-") {
            std::istringstream list(codes);
            std::string code;
            while (std::getline(list, code, ',')) entry.expectedCodes.push_back(code);
        }
        entries.push_back(std::move(entry));
    }
    if (!has_errors(out.diagnostics)) out.value = std::move(entries);
    return out;
}

}  // namespace scdl
