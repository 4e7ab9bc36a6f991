#include "dmine/csv_stream.hpp"

#include <stdexcept>

#include "dmine/util.hpp"

namespace dmine {

namespace {

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

}  // namespace

LogHeader LogHeader::parse(const std::vector<std::string>& columns) {
    LogHeader h;
    for (int i = 0; i < static_cast<int>(columns.size()); ++i) {
        const std::string& name = columns[i];
        if (name == "case_id") {
            h.case_col = i;
        } else if (name == "activity") {
            h.activity_col = i;
        } else if (name == "timestamp") {
            h.timestamp_col = i;
        } else if (!name.empty()) {
            h.attr_cols.emplace_back(i, name);
        }
    }
    if (h.case_col < 0 || h.activity_col < 0) {
        throw std::runtime_error(
            "event log header must contain 'case_id' and 'activity' columns");
    }
    return h;
}

std::optional<Event> parse_event(const std::vector<std::string>& fields,
                                 const LogHeader& header, std::uint64_t seq,
                                 ParseCounters& counters) {
    const int needed = std::max(header.case_col, header.activity_col);
    if (static_cast<int>(fields.size()) <= needed) {
        ++counters.malformed_rows;
        return std::nullopt;
    }
    Event e;
    e.case_id = fields[header.case_col];
    e.activity = fields[header.activity_col];
    if (e.case_id.empty() || e.activity.empty()) {
        ++counters.malformed_rows;
        return std::nullopt;
    }
    if (header.timestamp_col >= 0 &&
        header.timestamp_col < static_cast<int>(fields.size())) {
        e.timestamp = fields[header.timestamp_col];
    }
    for (const auto& [col, name] : header.attr_cols) {
        if (col >= static_cast<int>(fields.size())) continue;
        const std::string& cell = fields[col];
        if (cell.empty()) continue;  // absent attribute
        if (auto value = parse_number(cell)) {
            e.attributes[name] = *value;
        } else {
            ++counters.attribute_warnings;
        }
    }
    e.seq = seq;
    return e;
}

EventReader::EventReader(std::istream& in, char delimiter)
    : in_(in), delimiter_(delimiter) {
    std::string line;
    if (!std::getline(in_, line)) {
        empty_input_ = true;  // a zero-byte source is an empty stream
        return;
    }
    header_ = LogHeader::parse(split(strip_cr(line), delimiter_));
}

std::optional<Event> EventReader::next() {
    if (empty_input_) return std::nullopt;
    std::string line;
    while (std::getline(in_, line)) {
        ++rows_read_;
        line = strip_cr(line);
        if (line.empty()) continue;
        auto fields = split(line, delimiter_);
        if (auto e = parse_event(fields, header_, next_seq_, counters_)) {
            ++next_seq_;
            return e;
        }
    }
    return std::nullopt;
}

std::uint64_t replay_digest(std::istream& in, char delimiter) {
    EventReader reader(in, delimiter);
    std::uint64_t h = fnv1a("replay");
    while (auto e = reader.next()) {
        h = fnv1a(e->case_id, h);
        h = fnv1a("|", h);
        h = fnv1a(e->activity, h);
        h = fnv1a("|", h);
        h = fnv1a(std::to_string(e->seq), h);
        for (const auto& [k, v] : e->attributes) {
            h = fnv1a(k, h);
            h = fnv1a("=", h);
            h = fnv1a(format_fixed(v, 6), h);
        }
        h = fnv1a("\n", h);
    }
    return h;
}

}  // namespace dmine
