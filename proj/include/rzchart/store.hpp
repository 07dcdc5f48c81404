#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "rzchart/monitor.hpp"

namespace rzchart {

// Directory of ChartState documents, one "<id>.json" per chart. Each write
// goes to a temporary file that is then renamed over the old document, so
// readers only ever see committed snapshots. Writes to one chart id are
// serialized; different charts proceed independently.
class ChartStore {
public:
    explicit ChartStore(std::filesystem::path directory);

    const std::filesystem::path& directory() const { return dir_; }

    struct Created {
        ChartState state;
        bool created = true;  // false when a client token was replayed
    };

    // A repeated client token returns the chart created by its first use.
    Created create(const ChartConfig& cfg, const std::optional<std::string>& client_token = std::nullopt);

    // Throws NotFoundError for unknown or malformed ids.
    ChartState get(const std::string& id) const;

    // Most recently updated first; ties broken by id.
    std::vector<ChartState> list() const;

    InspectionRecord ingest(const std::string& id, std::span<const double> x_values,
                            std::span<const double> y_values, std::optional<std::string> label = std::nullopt);

    ChartState reset(const std::string& id);

private:
    std::filesystem::path path_for(const std::string& id) const;
    std::shared_mutex& lock_for(const std::string& id) const;
    void write(const ChartState& state) const;
    ChartState read(const std::filesystem::path& path) const;

    std::filesystem::path dir_;
    mutable std::mutex registry_mutex_;
    mutable std::map<std::string, std::unique_ptr<std::shared_mutex>> locks_;
    std::map<std::string, std::string> tokens_;
};

}  // namespace rzchart
