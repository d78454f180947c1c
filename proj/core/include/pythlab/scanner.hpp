#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "pythlab/field.hpp"

namespace pythlab {

inline constexpr int kReportVersion = 1;

/// Unreadable checkpoint, or one written for another field/configuration.
class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ScanConfig {
    Int trace_bound = 0;
    int length_cap = 7;
    int witness_retention = 3;

    friend bool operator==(const ScanConfig&, const ScanConfig&) = default;
};

struct TraceTally {
    Int trace = 0;
    std::map<int, std::uint64_t> counts;
    /// Totally positive elements whose length exceeds a cap below 7
    /// (this includes elements that are not sums of squares at all).
    std::uint64_t exceeds_cap = 0;

    friend bool operator==(const TraceTally&, const TraceTally&) = default;
};

struct ScanReport {
    FieldPtr field;
    ScanConfig config;
    /// One entry per trace value that has at least one totally positive element.
    std::vector<TraceTally> per_trace;
    std::map<int, std::uint64_t> counts;
    std::uint64_t exceeds_cap = 0;
    int max_length = 0;
    /// Smallest (trace, then coordinates) elements of each length class.
    std::map<int, std::vector<Quad>> witnesses;
    Int last_trace = 0;
    bool complete = false;
    /// Wall time of this process only; not part of the serialized report.
    double elapsed_seconds = 0;

    /// JSON lines: config header, one line per trace, final summary.
    std::string to_jsonl() const;
};

/// Every integral totally positive element with the given trace, in
/// lexicographic (b, c, d) order.
std::vector<Quad> totally_positive_with_trace(const Field& field, Int trace);

/// Streams every integral totally positive α with 1 ≤ Tr(α) ≤ trace_bound,
/// ordered by trace then coordinates.
void enumerate_totally_positive(const Field& field, Int trace_bound, const std::function<void(const Quad&)>& fn);

/// Canonical-signed nonzero integral x with Tr(x²) ≤ trace_bound, paired
/// with x², sorted by Tr(x²) then x.
std::vector<std::pair<Quad, Quad>> small_squares(const Field& field, Int trace_bound);

/// Bounded-trace sweep computing the length of every totally positive
/// element up to the trace bound.
///
/// Lengths come from a table filled in increasing trace order:
/// ℓ(α) = 1 if α is a square, otherwise 1 + min ℓ(α − x²) over squares x²
/// with α − x² totally positive. Every nonzero square has trace ≥ 4, so the
/// right-hand side only reads traces ≤ Tr(α) − 4; four consecutive trace
/// values are independent and form one parallel window.
class Scanner {
public:
    Scanner(FieldPtr field, ScanConfig config, unsigned threads = 1);

    /// Restores a scanner from a checkpoint. Throws CheckpointError if the
    /// file is corrupt or was written for another field or configuration.
    static Scanner resume(FieldPtr field, ScanConfig config, const std::filesystem::path& checkpoint,
                          unsigned threads = 1);

    /// Processes traces up to `stop_after` (default: the bound), writing a
    /// checkpoint every `checkpoint_every` traces if a path is given.
    /// Returns true once every trace is done.
    bool run(std::optional<Int> stop_after = std::nullopt, const std::filesystem::path* checkpoint = nullptr,
             Int checkpoint_every = 64);

    void save_checkpoint(const std::filesystem::path& path) const;

    ScanReport report() const;

    Int last_trace() const noexcept { return last_trace_; }
    bool complete() const noexcept { return last_trace_ >= config_.trace_bound; }

    /// Length of a processed element; 0 when it is not a sum of squares or
    /// has not been reached.
    int length_of(const Quad& alpha) const;

private:
    struct Entry {
        Int b, c, d;
        std::uint8_t length;
    };

    void prepare();
    int compute_length(const Quad& alpha) const;
    void process_window(Int first, Int last);

    FieldPtr field_;
    ScanConfig config_;
    unsigned threads_ = 1;
    std::vector<std::pair<Quad, Quad>> squares_;
    std::unordered_set<Quad, QuadHash> square_set_;
    std::vector<std::vector<Entry>> table_;
    std::vector<TraceTally> per_trace_;
    Int last_trace_ = 0;
    double elapsed_ = 0;
};

ScanReport scan_lengths(FieldPtr field, ScanConfig config, unsigned threads = 1);

}  // namespace pythlab
