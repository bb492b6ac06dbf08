#include <fractex/dataset.hpp>

#include <fractex/errors.hpp>
#include <fractex/pgm.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

namespace fractex {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::filesystem::path ManifestEntry::resolve_path(
    const std::filesystem::path& manifest_dir) const {
    const std::filesystem::path p(path);
    return p.is_absolute() ? p : manifest_dir / p;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path.string());

    std::vector<ManifestEntry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const std::vector<std::string> fields = split_csv_line(stripped);
        if (fields.size() < 2 || fields.size() > 3) {
            throw IoError("manifest " + path.string() + " line " + std::to_string(line_no) +
                          ": expected 'path,label[,source]'");
        }
        ManifestEntry e;
        e.path = trim(fields[0]);
        e.label = trim(fields[1]);
        e.source = fields.size() == 3 ? trim(fields[2]) : e.path;
        if (e.path.empty() || e.label.empty()) {
            throw IoError("manifest " + path.string() + " line " + std::to_string(line_no) +
                          ": empty path or label");
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

void write_manifest(const std::filesystem::path& path, std::span<const ManifestEntry> entries) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write manifest: " + path.string());
    for (const ManifestEntry& e : entries) {
        out << e.path << ',' << e.label;
        if (!e.source.empty() && e.source != e.path) out << ',' << e.source;
        out << '\n';
    }
    if (!out) throw IoError("failed writing manifest: " + path.string());
}

std::vector<ImageRecord> load_manifest_images(const std::filesystem::path& manifest) {
    const std::vector<ManifestEntry> entries = read_manifest(manifest);
    const std::filesystem::path dir = manifest.parent_path();
    std::vector<ImageRecord> records;
    records.reserve(entries.size());
    for (const ManifestEntry& e : entries) {
        const std::filesystem::path img_path = e.resolve_path(dir);
        try {
            records.push_back({load_pgm_file(img_path), e.label, e.source});
        } catch (const Error& err) {
            throw IoError("loading " + img_path.string() + ": " + err.what());
        }
    }
    return records;
}

void write_feature_csv(const std::filesystem::path& path, const FeatureTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write feature csv: " + path.string());
    for (const std::string& name : table.names) {
        out << name << ',';
    }
    out << "label,source\n";
    if (table.sources.size() != table.rows.size()) {
        throw PreconditionError("write_feature_csv: sources and rows differ in length");
    }
    for (size_t i = 0; i < table.rows.size(); ++i) {
        const FeatureVector& fv = table.rows[i];
        if (fv.values.size() != table.names.size()) {
            throw PreconditionError("write_feature_csv: row " + std::to_string(i) +
                                    " length mismatch");
        }
        for (double v : fv.values) {
            out << format_double(v) << ',';
        }
        out << fv.label << ',' << table.sources[i] << '\n';
    }
    if (!out) throw IoError("failed writing feature csv: " + path.string());
}

FeatureTable read_feature_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open feature csv: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty feature csv: " + path.string());

    std::vector<std::string> header = split_csv_line(trim(line));
    if (header.size() < 3 || header[header.size() - 2] != "label" ||
        header.back() != "source") {
        throw IoError("feature csv " + path.string() +
                      ": header must end with 'label,source'");
    }
    FeatureTable table;
    table.names.assign(header.begin(), header.end() - 2);

    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(stripped);
        if (fields.size() != header.size()) {
            throw IoError("feature csv " + path.string() + " line " + std::to_string(line_no) +
                          ": expected " + std::to_string(header.size()) + " fields");
        }
        FeatureVector fv;
        fv.names = table.names;
        fv.values.reserve(table.names.size());
        for (size_t j = 0; j < table.names.size(); ++j) {
            try {
                size_t pos = 0;
                fv.values.push_back(std::stod(fields[j], &pos));
                if (pos != fields[j].size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw IoError("feature csv " + path.string() + " line " +
                              std::to_string(line_no) + ": bad number '" + fields[j] + "'");
            }
        }
        fv.label = fields[header.size() - 2];
        table.sources.push_back(fields.back());
        table.rows.push_back(std::move(fv));
    }
    return table;
}

} // namespace fractex
