#include "rzchart/store.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "rzchart/errors.hpp"
#include "rzchart/json_io.hpp"

namespace rzchart {
namespace fs = std::filesystem;

namespace {

bool is_valid_id(const std::string& id) {
    return !id.empty() && id.size() <= 64 &&
           std::all_of(id.begin(), id.end(), [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

}  // namespace

ChartStore::ChartStore(fs::path directory) : dir_(std::move(directory)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) {
        throw IoError(fmt::format("cannot use '{}' as chart store: {}", dir_.string(), ec.message()));
    }
}

fs::path ChartStore::path_for(const std::string& id) const {
    if (!is_valid_id(id)) throw NotFoundError("no chart with id '" + id + "'");
    return dir_ / (id + ".json");
}

std::shared_mutex& ChartStore::lock_for(const std::string& id) const {
    std::lock_guard guard(registry_mutex_);
    auto& slot = locks_[id];
    if (!slot) slot = std::make_unique<std::shared_mutex>();
    return *slot;
}

void ChartStore::write(const ChartState& state) const {
    static std::atomic<unsigned long> counter{0};
    const fs::path target = path_for(state.id);
    const fs::path tmp = dir_ / fmt::format(".{}.{}.tmp", state.id, counter.fetch_add(1));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out << to_json_value(state).dump(2) << '\n';
        out.flush();
        if (!out) throw IoError("failed writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot commit '" + target.string() + "'");
    }
}

ChartState ChartStore::read(const fs::path& path) const {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError("no chart stored at '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const auto j = nlohmann::json::parse(buf.str(), nullptr, false);
    if (j.is_discarded()) throw IoError("corrupt chart document '" + path.string() + "'");
    try {
        return chart_state_from_json(j);
    } catch (const ValidationError& e) {
        throw IoError("invalid chart document '" + path.string() + "': " + e.what());
    }
}

ChartStore::Created ChartStore::create(const ChartConfig& cfg, const std::optional<std::string>& client_token) {
    std::unique_lock token_guard(registry_mutex_, std::defer_lock);
    if (client_token) {
        token_guard.lock();
        if (const auto it = tokens_.find(*client_token); it != tokens_.end()) {
            const std::string id = it->second;
            token_guard.unlock();
            return {get(id), false};
        }
    }
    ChartState state = create_chart(cfg);
    write(state);
    if (client_token) tokens_.emplace(*client_token, state.id);
    return {std::move(state), true};
}

ChartState ChartStore::get(const std::string& id) const {
    const fs::path path = path_for(id);
    std::shared_lock guard(lock_for(id));
    if (!fs::exists(path)) throw NotFoundError("no chart with id '" + id + "'");
    return read(path);
}

std::vector<ChartState> ChartStore::list() const {
    std::vector<std::string> ids;
    for (const auto& entry : fs::directory_iterator(dir_)) {
        const fs::path& p = entry.path();
        if (entry.is_regular_file() && p.extension() == ".json" && is_valid_id(p.stem().string())) {
            ids.push_back(p.stem().string());
        }
    }
    std::vector<ChartState> out;
    out.reserve(ids.size());
    for (const auto& id : ids) {
        try {
            out.push_back(get(id));
        } catch (const NotFoundError&) {
            // removed between the directory scan and the read
        }
    }
    std::sort(out.begin(), out.end(), [](const ChartState& a, const ChartState& b) {
        if (a.updated_at != b.updated_at) return a.updated_at > b.updated_at;
        return a.id < b.id;
    });
    return out;
}

InspectionRecord ChartStore::ingest(const std::string& id, std::span<const double> x_values,
                                    std::span<const double> y_values, std::optional<std::string> label) {
    const fs::path path = path_for(id);
    std::unique_lock guard(lock_for(id));
    if (!fs::exists(path)) throw NotFoundError("no chart with id '" + id + "'");
    ChartState state = read(path);
    InspectionRecord rec = ingest_inspection(state, x_values, y_values, std::move(label), utc_now_iso8601());
    write(state);
    return rec;
}

ChartState ChartStore::reset(const std::string& id) {
    ChartState next = reset_chart(get(id));
    write(next);
    return next;
}

}  // namespace rzchart
