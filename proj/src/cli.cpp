#include "scdl/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "scdl/analysis.hpp"
#include "scdl/export.hpp"
#include "scdl/parser.hpp"
#include "scdl/resolver.hpp"
#include "scdl/validator.hpp"

namespace scdl {

namespace {

std::optional<std::string> read_file(const std::string& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) return std::nullopt;
    return FileLoader{}.load(path);
}

ExitStatus worst(ExitStatus a, ExitStatus b) {
    return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

class Driver {
public:
    Driver(std::ostream& out, std::ostream& err, const CliOptions& options)
        : out_(out), err_(err), options_(options) {}

    bool jsonDiagnostics = false;

    void print(const std::vector<Diagnostic>& diagnostics) {
        for (const auto& d : diagnostics) {
            if (jsonDiagnostics) {
                err_ << render_diagnostic_json(d) << '\n';
            } else if (options_.color) {
                const char* color = d.severity == Severity::Error ? "\x1b[31m" : "\x1b[33m";
                std::string line = render_diagnostic(d);
                const std::string sev(to_string(d.severity));
                auto at = line.find(": " + sev + "[");
                if (at != std::string::npos) line.replace(at + 2, sev.size(), color + sev + "\x1b[0m");
                err_ << line << '\n';
            } else {
                err_ << render_diagnostic(d) << '\n';
            }
            print(d.related);
        }
    }

    ExitStatus io_failure(const std::string& path) {
        err_ << "scd: cannot read '" << path << "'\n";
        return ExitStatus::Usage;
    }

    // Resolves the root, printing diagnostics. Usage on unreadable root.
    std::pair<std::optional<ResolvedModel>, ExitStatus> load(const std::string& root) {
        if (!read_file(root)) return {std::nullopt, io_failure(root)};
        FileLoader loader;
        auto resolved = resolve(root, loader);
        print(resolved.diagnostics);
        if (!resolved.ok()) return {std::nullopt, ExitStatus::Diagnostics};
        return {std::move(resolved.value), ExitStatus::Success};
    }

    ExitStatus check(const std::vector<std::string>& files, bool denyWarnings) {
        ExitStatus status = ExitStatus::Success;
        for (const auto& file : files) {
            auto [model, loaded] = load(file);
            if (!model) {
                status = worst(status, loaded);
                continue;
            }
            auto diagnostics = validate(*model);
            print(diagnostics);
            const bool failing = has_errors(diagnostics) || (denyWarnings && !diagnostics.empty());
            if (failing) status = worst(status, ExitStatus::Diagnostics);
        }
        return status;
    }

    ExitStatus fmt(const std::vector<std::string>& files, bool checkOnly) {
        ExitStatus status = ExitStatus::Success;
        for (const auto& file : files) {
            auto text = read_file(file);
            if (!text) {
                status = worst(status, io_failure(file));
                continue;
            }
            auto parsed = parse(*text, file);
            if (!parsed.unit) {
                print(parsed.diagnostics);
                err_ << "scd: refusing to format '" << file << "' with syntax errors\n";
                status = worst(status, ExitStatus::Usage);
                continue;
            }
            const std::string canonical = format(*parsed.unit);
            if (canonical == *text) continue;
            if (checkOnly) {
                err_ << file << ": not canonically formatted\n";
                status = worst(status, ExitStatus::Diagnostics);
                continue;
            }
            std::ofstream o(file, std::ios::binary | std::ios::trunc);
            o << canonical;
            if (!o) status = worst(status, io_failure(file));
        }
        return status;
    }

    ExitStatus exportDocument(const std::string& root, const std::string& formatName,
                              const std::optional<std::string>& levelPath) {
        if (formatName != "json" && formatName != "dot") {
            err_ << "scd: unknown export format '" << formatName << "' (expected json or dot)\n";
            return ExitStatus::Usage;
        }
        if (formatName == "json" && levelPath) {
            err_ << "scd: --level applies to --format dot only\n";
            return ExitStatus::Usage;
        }
        auto [model, loaded] = load(root);
        if (!model) return loaded;
        if (formatName == "json") {
            out_ << export_json(*model);
            return ExitStatus::Success;
        }
        auto dot = export_dot(*model, levelPath ? std::optional(split_path(*levelPath)) : std::nullopt);
        print(dot.diagnostics);
        if (!dot.ok()) return ExitStatus::Diagnostics;
        out_ << *dot.value;
        return ExitStatus::Success;
    }

    ExitStatus query(const std::string& root, const std::string& kind, const std::optional<std::string>& target,
                     const std::optional<std::string>& valuesFile) {
        if (kind != "boundary" && kind != "drill" && kind != "eval") {
            err_ << "scd: unknown query '" << kind << "' (expected boundary, drill or eval)\n";
            return ExitStatus::Usage;
        }
        if (kind != "eval" && !target) {
            err_ << "scd: query " << kind << " needs a system path\n";
            return ExitStatus::Usage;
        }
        std::optional<std::string> valuesText;
        if (kind == "eval") {
            if (!valuesFile) {
                err_ << "scd: query eval needs --values FILE\n";
                return ExitStatus::Usage;
            }
            valuesText = read_file(*valuesFile);
            if (!valuesText) return io_failure(*valuesFile);
        }

        auto [model, loaded] = load(root);
        if (!model) return loaded;
        auto diagnostics = validate(*model);
        if (has_errors(diagnostics)) {
            print(diagnostics);
            return ExitStatus::Diagnostics;
        }

        if (kind == "boundary") {
            auto decl = resolve_element_path(*model, split_path(*target));
            const auto* system = decl ? std::get_if<const SystemDecl*>(&*decl) : nullptr;
            if (!system) {
                print({make_error("E-QRY-001", "'" + *target + "' does not name a system",
                                  SourceSpan{model->root().sourcePath})});
                return ExitStatus::Diagnostics;
            }
            auto partition = classify_boundary(**system);
            out_ << "boundary:" << joined(partition.boundary) << '\n';
            out_ << "internal:" << joined(partition.internal) << '\n';
            return ExitStatus::Success;
        }
        if (kind == "drill") {
            auto view = drill_down(*model, split_path(*target));
            if (!view.ok()) {
                print(view.diagnostics);
                return ExitStatus::Diagnostics;
            }
            for (const auto& name : view.value->system_names()) out_ << name << '\n';
            return ExitStatus::Success;
        }

        auto valuation = parse_valuation(*valuesText, *valuesFile);
        if (!valuation.ok()) {
            print(valuation.diagnostics);
            return ExitStatus::Usage;
        }
        auto values = evaluate_aggregates(*model, *valuation.value);
        if (!values.ok()) {
            print(values.diagnostics);
            return ExitStatus::Diagnostics;
        }
        for (const auto& [key, value] : *values.value) out_ << key << '=' << format_number(value) << '\n';
        return ExitStatus::Success;
    }

private:
    static std::string joined(const std::vector<std::string>& items) {
        std::string out;
        for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : " ") + items[i];
        return out;
    }

    std::ostream& out_;
    std::ostream& err_;
    CliOptions options_;
};

}  // namespace

ExitStatus run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                   const CliOptions& options) {
    Driver driver(out, err, options);

    CLI::App app{"System Composition Diagram toolkit", "scd"};
    app.require_subcommand(1);

    std::vector<std::string> files;
    bool denyWarnings = false;
    auto* check = app.add_subcommand("check", "Parse, resolve and validate root models");
    check->add_option("files", files, "Root .scd files")->required();
    check->add_flag("--json-diagnostics", driver.jsonDiagnostics, "One JSON object per diagnostic line");
    check->add_flag("--deny-warnings", denyWarnings, "Warnings also fail the run");

    std::vector<std::string> fmtFiles;
    bool checkOnly = false;
    auto* fmt = app.add_subcommand("fmt", "Rewrite files in canonical form");
    fmt->add_option("files", fmtFiles, ".scd files")->required();
    fmt->add_flag("--check", checkOnly, "Write nothing; fail if any file is not canonical");

    std::string exportRoot;
    std::string exportFormat = "json";
    std::optional<std::string> level;
    auto* exp = app.add_subcommand("export", "Emit JSON or DOT");
    exp->add_option("root", exportRoot, "Root .scd file")->required();
    exp->add_option("--format", exportFormat, "json or dot");
    exp->add_option("--level", level, "Dotted path of an exploded system (dot only)");
    exp->add_flag("--json-diagnostics", driver.jsonDiagnostics, "One JSON object per diagnostic line");

    std::string queryRoot;
    std::string queryKind;
    std::optional<std::string> target;
    std::optional<std::string> valuesFile;
    auto* query = app.add_subcommand("query", "boundary SYSTEM | drill SYSTEM | eval --values FILE");
    query->add_option("root", queryRoot, "Root .scd file")->required();
    query->add_option("kind", queryKind, "boundary, drill or eval")->required();
    query->add_option("target", target, "Dotted system path");
    query->add_option("--values", valuesFile, "Valuation file for eval");
    query->add_flag("--json-diagnostics", driver.jsonDiagnostics, "One JSON object per diagnostic line");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ExitStatus::Success;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ExitStatus::Success;
    } catch (const CLI::ParseError& e) {
        err << "scd: " << e.what() << '\n' << "usage: scd {check|fmt|export|query} ... (see scd --help)\n";
        return ExitStatus::Usage;
    }

    try {
        if (check->parsed()) return driver.check(files, denyWarnings);
        if (fmt->parsed()) return driver.fmt(fmtFiles, checkOnly);
        if (exp->parsed()) return driver.exportDocument(exportRoot, exportFormat, level);
        if (query->parsed()) return driver.query(queryRoot, queryKind, target, valuesFile);
    } catch (const std::exception& e) {
        err << "scd: " << e.what() << '\n';
        return ExitStatus::Usage;
    }
    return ExitStatus::Usage;
}

}  // namespace scdl
