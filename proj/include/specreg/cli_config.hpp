#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace specreg::cli {

using ojson = nlohmann::ordered_json;

// Strict JSON parse: rejects duplicate keys (anywhere) before building the
// document. Unknown-key rejection happens per command via ConfigReader.
ojson parse_strict_json(const std::string& text);

// Tracks key consumption over one JSON object so that unread (unknown)
// keys become hard errors. Silent typos in experiment parameters are worse
// than a failed run.
class ConfigReader {
public:
    ConfigReader(const ojson& obj, std::string context);
    bool has(const std::string& key) const;
    ojson consume(const std::string& key);                 // required
    std::optional<ojson> consume_optional(const std::string& key);
    void finish() const;                                   // throws on leftovers
    const std::string& context() const { return context_; }

private:
    const ojson& obj_;
    std::string context_;
    mutable std::vector<std::string> consumed_;
};

struct RunConfig {
    std::string command;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out_dir = ".";
    ojson params; // remaining command-specific fields (object)
};

// Reads and validates the top-level config; flag overrides (seed, threads,
// out) are applied after the file contents.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

struct RunOutcome {
    bool all_pass = true;
    std::vector<std::string> files; // artifact names, relative to out_dir
};

// Executes the configured command, writes artifacts plus manifest.json
// into out_dir, and reports whether every emitted pass flag is true.
// Throws on invalid parameters; the CLI wrapper turns that into a
// machine-readable error record and a nonzero exit.
RunOutcome run(const RunConfig& config);

} // namespace specreg::cli
