#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "dmine/event.hpp"

namespace dmine {

// Resolved header of a delimited event log. `case_id` and `activity` are
// required; `timestamp` is recognized and carried; every other column is a
// numeric attribute candidate.
struct LogHeader {
    int case_col = -1;
    int activity_col = -1;
    int timestamp_col = -1;
    std::vector<std::pair<int, std::string>> attr_cols;  // column -> name

    // Throws std::runtime_error when case_id/activity are missing.
    static LogHeader parse(const std::vector<std::string>& columns);
};

struct ParseCounters {
    std::uint64_t attribute_warnings = 0;  // non-numeric attribute cells
    std::uint64_t malformed_rows = 0;      // skipped rows
};

// Parses one data row against the header. Empty attribute cells mean
// "absent"; non-numeric non-empty cells are skipped and counted. Returns
// nullopt (and counts a malformed row) when the row is too short or the
// required fields are empty.
std::optional<Event> parse_event(const std::vector<std::string>& fields,
                                 const LogHeader& header, std::uint64_t seq,
                                 ParseCounters& counters);

// Streaming reader over an event log: one well-formed event per call, in
// input order, with seq assigned 0,1,2,... Malformed rows are skipped with
// a warning count.
class EventReader {
public:
    // Throws std::runtime_error when a header is present but lacks the
    // required columns. A zero-byte source yields an empty stream.
    EventReader(std::istream& in, char delimiter = ',');

    std::optional<Event> next();

    const ParseCounters& counters() const { return counters_; }
    std::uint64_t events_emitted() const { return next_seq_; }

private:
    std::istream& in_;
    char delimiter_;
    LogHeader header_;
    ParseCounters counters_;
    bool empty_input_ = false;
    std::uint64_t next_seq_ = 0;
    std::uint64_t rows_read_ = 0;
};

// Order-sensitive digest of a full replay; used to assert determinism.
std::uint64_t replay_digest(std::istream& in, char delimiter = ',');

}  // namespace dmine
