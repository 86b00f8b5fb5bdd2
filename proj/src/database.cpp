#include "microcell/database.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace microcell {

int DatabaseTable::max_clusters(size_t channel) const {
    int mx = 0;
    for (const auto& row : rows)
        if (channel < row.channels.size()) mx = std::max(mx, row.channels[channel].n_clusters);
    return mx;
}

std::vector<CellRecord> build_records(
    const ComponentSet& cells, const std::vector<std::pair<int, CellMeasurements>>& measurements,
    const std::vector<std::vector<std::pair<int, CellFluorStats>>>& channel_stats, int frame_id) {
    std::map<int, CellMeasurements> by_id(measurements.begin(), measurements.end());

    std::vector<CellRecord> records;
    for (const auto& cell : cells.components) {
        auto it = by_id.find(cell.id);
        if (it == by_id.end())
            throw std::invalid_argument("no measurements for cell id " + std::to_string(cell.id));
        CellRecord rec;
        rec.id = cell.id;
        rec.frame_id = frame_id;
        rec.measurements = it->second;
        for (const auto& channel : channel_stats) {
            auto sit = std::find_if(channel.begin(), channel.end(),
                                    [&](const auto& kv) { return kv.first == cell.id; });
            if (sit == channel.end())
                throw std::invalid_argument("no fluorescence stats for cell id " +
                                            std::to_string(cell.id));
            rec.channels.push_back(sit->second);
        }
        records.push_back(std::move(rec));
    }
    std::sort(records.begin(), records.end(),
              [](const CellRecord& a, const CellRecord& b) { return a.id < b.id; });
    return records;
}

namespace {

// shortest round-trip representation, locale independent
std::string num(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

// micrometer-derived quantities: 6 significant digits
std::string um(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string join_profile(const std::vector<double>& values) {
    std::string out;
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out += ';';
        out += num(values[i]);
    }
    return out;
}

constexpr const char* agg_names[3] = {"mean", "max", "sum"};

}  // namespace

std::string database_header(const DatabaseTable& table) {
    std::string h = "Id,frame id,length,width,area,radius,circumference,surface area,volume";
    for (size_t ch = 0; ch < table.channel_names.size(); ++ch) {
        const std::string& name = table.channel_names[ch];
        h += ',' + name + " cell mean intensity";
        h += ',' + name + " cell std intensity";
        h += ',' + name + " cell intensity CVI";
        for (const char* axis : {"vertical", "horizontal"})
            for (const char* agg : agg_names)
                h += ',' + name + ' ' + axis + ' ' + agg + " intensity profile";
        h += ',' + name + " number of clusters";
        h += ',' + name + " has clusters";
        const int mc = table.max_clusters(ch);
        for (int i = 1; i <= mc; ++i) {
            const std::string prefix = name + " cluster " + std::to_string(i) + ' ';
            for (const char* field :
                 {"id", "size", "center", "is polar", "mean intensity", "std intensity",
                  "max intensity", "sum intensity"})
                h += ',' + prefix + field;
        }
        h += ',' + name + " leading cluster index";
    }
    return h;
}

std::string database_csv(const DatabaseTable& table) {
    std::ostringstream out;
    out << database_header(table) << '\n';

    std::vector<int> max_clusters(table.channel_names.size());
    for (size_t ch = 0; ch < table.channel_names.size(); ++ch)
        max_clusters[ch] = table.max_clusters(ch);

    for (const auto& row : table.rows) {
        const CellMeasurements& m = row.measurements;
        out << row.id << ',' << row.frame_id << ',' << um(m.length_um) << ',' << um(m.width_um)
            << ',' << um(m.area_um2) << ',' << um(m.radius_um) << ',' << um(m.circumference_um)
            << ',' << um(m.surface_area_um2) << ',' << um(m.volume_um3);
        for (size_t ch = 0; ch < table.channel_names.size(); ++ch) {
            const CellFluorStats& s = row.channels.at(ch);
            out << ',' << num(s.mean) << ',' << num(s.std_dev) << ','
                << (s.cvi ? num(*s.cvi) : "");
            for (int axis : {1, 0})  // vertical, horizontal
                for (int agg = 0; agg < 3; ++agg)
                    out << ',' << join_profile(s.profiles[axis][agg]);
            out << ',' << s.n_clusters << ',' << (s.has_clusters ? "true" : "false");
            for (int i = 0; i < max_clusters[ch]; ++i) {
                if (i < int(s.clusters.size())) {
                    const ClusterRecord& c = s.clusters[i];
                    char center[48];
                    std::snprintf(center, sizeof(center), "(%.4f, %.4f)", c.center_x, c.center_y);
                    out << ',' << c.cluster_id << ',' << um(c.size_um2) << ",\"" << center << "\","
                        << (c.is_polar ? "true" : "false") << ',' << num(c.mean_intensity) << ','
                        << num(c.std_intensity) << ',' << num(c.max_intensity) << ','
                        << num(c.sum_intensity);
                } else {
                    out << ",,,,,,,,";  // 8 empty cluster fields
                }
            }
            // 1-based, matching the cluster column numbering
            out << ',' << (s.leading_cluster_index ? std::to_string(*s.leading_cluster_index + 1)
                                                   : "");
        }
        out << '\n';
    }
    return out.str();
}

void write_csv(const DatabaseTable& table, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + path + " for writing");
    file << database_csv(table);
    if (!file) throw std::runtime_error("failed writing " + path);
}

}  // namespace microcell
