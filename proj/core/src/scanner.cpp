#include "pythlab/scanner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "pythlab/region.hpp"

namespace pythlab {

namespace {

using json = nlohmann::ordered_json;

constexpr std::uint8_t kUnreached = 0xff;

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, n);
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
}

json config_json(const Field& f, const ScanConfig& c) {
    json cfg;
    cfg["p"] = f.p();
    cfg["q"] = f.q();
    cfg["m"] = f.m();
    cfg["s"] = f.s();
    cfg["t"] = f.t();
    cfg["trace_bound"] = c.trace_bound;
    cfg["cap"] = c.length_cap;
    cfg["retention"] = c.witness_retention;
    cfg["version"] = kReportVersion;
    return json{{"config", cfg}};
}

json tally_json(const TraceTally& tally, bool with_exceeds) {
    json counts = json::object();
    for (const auto& [k, n] : tally.counts) counts[std::to_string(k)] = n;
    json line{{"trace", tally.trace}, {"counts", counts}};
    if (with_exceeds) line["exceeds_cap"] = tally.exceeds_cap;
    return line;
}

void validate_config(const json& cfg, const Field& f, const ScanConfig& c) {
    auto expect = [&](const char* key, Int want) {
        if (!cfg.contains(key) || !cfg[key].is_number_integer()) {
            throw CheckpointError(std::string("corrupt checkpoint: config lacks '") + key + "'");
        }
        const Int got = cfg[key].get<Int>();
        if (got != want) {
            throw CheckpointError(std::string("checkpoint mismatch: ") + key + " is " + std::to_string(got) +
                                  ", expected " + std::to_string(want));
        }
    };
    expect("version", kReportVersion);
    expect("m", f.m());
    expect("s", f.s());
    expect("t", f.t());
    expect("trace_bound", c.trace_bound);
    expect("cap", c.length_cap);
    expect("retention", c.witness_retention);
}

}  // namespace

std::vector<Quad> totally_positive_with_trace(const Field& field, Int trace) {
    std::vector<Quad> out;
    if (trace < 1) return out;
    // 0 < σ_i < Tr, in units of 4σ_i.
    EmbeddingRegion region;
    region.lo.fill(0.0);
    region.hi.fill(4.0 * static_cast<double>(trace));
    region.fixed_a = trace;
    for_each_quad_in_region(field, region, [&](const Quad& x) {
        if (field.is_integral(x) && field.is_totally_positive(x)) out.push_back(x);
    });
    return out;
}

void enumerate_totally_positive(const Field& field, Int trace_bound, const std::function<void(const Quad&)>& fn) {
    for (Int a = 1; a <= trace_bound; ++a) {
        for (const Quad& x : totally_positive_with_trace(field, a)) fn(x);
    }
}

std::vector<std::pair<Quad, Quad>> small_squares(const Field& field, Int trace_bound) {
    // Tr(x²) = (a² + m b² + s c² + t d²) / 4 for x = (a + b√m + c√s + d√t)/4.
    std::vector<std::pair<Quad, Quad>> out;
    if (trace_bound < 4) return out;
    const Int limit = 4 * trace_bound;
    auto bound = [limit](Int coef) { return static_cast<Int>(std::sqrt(static_cast<double>(limit) / coef)) + 1; };
    const Int ma = bound(1), mb = bound(field.m()), mc = bound(field.s()), md = bound(field.t());
    for (Int a = 0; a <= ma; ++a) {
        for (Int b = -mb; b <= mb; ++b) {
            for (Int c = -mc; c <= mc; ++c) {
                for (Int d = -md; d <= md; ++d) {
                    const Quad x{a, b, c, d};
                    if (x.is_zero() || canonical_sign(x) != x) continue;
                    const Int norm2 = a * a + field.m() * b * b + field.s() * c * c + field.t() * d * d;
                    if (norm2 > limit) continue;
                    if (!field.is_integral(x)) continue;
                    out.emplace_back(x, field.square(x));
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
        if (l.second.a != r.second.a) return l.second.a < r.second.a;
        return l.first < r.first;
    });
    return out;
}

std::string ScanReport::to_jsonl() const {
    const bool with_exceeds = config.length_cap < 7;
    std::ostringstream os;
    os << config_json(*field, config).dump() << '\n';
    for (const TraceTally& tally : per_trace) os << tally_json(tally, with_exceeds).dump() << '\n';
    json totals = json::object();
    for (const auto& [k, n] : counts) totals[std::to_string(k)] = n;
    json wit = json::object();
    for (const auto& [k, list] : witnesses) {
        json arr = json::array();
        for (const Quad& q : list) arr.push_back(format_quad(q));
        wit[std::to_string(k)] = arr;
    }
    json summary{{"max_length", max_length}, {"counts", totals}};
    if (with_exceeds) summary["exceeds_cap"] = exceeds_cap;
    summary["witnesses"] = wit;
    summary["last_trace"] = last_trace;
    summary["complete"] = complete;
    os << json{{"summary", summary}}.dump() << '\n';
    return os.str();
}

Scanner::Scanner(FieldPtr field, ScanConfig config, unsigned threads)
    : field_(std::move(field)), config_(config), threads_(std::max(1u, threads)) {
    if (!field_) throw std::invalid_argument("scanner requires a field");
    if (config_.trace_bound < 1) throw std::invalid_argument("trace_bound must be at least 1");
    if (config_.length_cap < 1) throw std::invalid_argument("length cap must be at least 1");
    if (config_.witness_retention < 0) throw std::invalid_argument("witness retention must be nonnegative");
    prepare();
}

void Scanner::prepare() {
    squares_ = small_squares(*field_, config_.trace_bound);
    square_set_.clear();
    for (const auto& [x, sq] : squares_) square_set_.insert(sq);
    table_.assign(static_cast<std::size_t>(config_.trace_bound) + 1, {});
}

int Scanner::length_of(const Quad& alpha) const {
    if (alpha.a < 1 || alpha.a > last_trace_) return 0;
    const auto& row = table_[static_cast<std::size_t>(alpha.a)];
    const auto it = std::lower_bound(row.begin(), row.end(), alpha, [](const Entry& e, const Quad& q) {
        return std::tie(e.b, e.c, e.d) < std::tie(q.b, q.c, q.d);
    });
    if (it == row.end() || it->b != alpha.b || it->c != alpha.c || it->d != alpha.d) return 0;
    return it->length;
}

int Scanner::compute_length(const Quad& alpha) const {
    if (square_set_.count(alpha)) return 1;
    int best = kUnreached;
    for (const auto& [x, sq] : squares_) {
        if (sq.a > alpha.a - 4) break;
        const int rest = length_of(alpha - sq);
        if (rest > 0 && rest + 1 < best) {
            best = rest + 1;
            if (best == 2) break;
        }
    }
    return best == kUnreached ? 0 : best;
}

void Scanner::process_window(Int first, Int last) {
    const std::size_t span = static_cast<std::size_t>(last - first + 1);
    std::vector<std::vector<Quad>> candidates(span);
    parallel_for(span, threads_, [&](std::size_t i) {
        candidates[i] = totally_positive_with_trace(*field_, first + static_cast<Int>(i));
    });
    std::vector<std::pair<std::size_t, std::size_t>> flat;
    for (std::size_t i = 0; i < span; ++i) {
        for (std::size_t j = 0; j < candidates[i].size(); ++j) flat.emplace_back(i, j);
    }
    std::vector<std::uint8_t> lengths(flat.size(), 0);
    parallel_for(flat.size(), threads_, [&](std::size_t k) {
        lengths[k] = static_cast<std::uint8_t>(compute_length(candidates[flat[k].first][flat[k].second]));
    });

    std::size_t k = 0;
    for (std::size_t i = 0; i < span; ++i) {
        const Int trace = first + static_cast<Int>(i);
        if (candidates[i].empty()) continue;
        TraceTally tally{trace, {}, 0};
        auto& row = table_[static_cast<std::size_t>(trace)];
        for (const Quad& x : candidates[i]) {
            const int len = lengths[k++];
            if (len > 0) row.push_back({x.b, x.c, x.d, static_cast<std::uint8_t>(len)});
            if (len > 0 && len <= config_.length_cap) {
                ++tally.counts[len];
            } else if (config_.length_cap < 7) {
                ++tally.exceeds_cap;
            }
        }
        per_trace_.push_back(std::move(tally));
    }
    last_trace_ = last;
}

bool Scanner::run(std::optional<Int> stop_after, const std::filesystem::path* checkpoint, Int checkpoint_every) {
    const auto started = std::chrono::steady_clock::now();
    const Int target = std::min(config_.trace_bound, stop_after.value_or(config_.trace_bound));
    Int since_checkpoint = 0;
    while (last_trace_ < target) {
        const Int first = last_trace_ + 1;
        const Int last = std::min(first + 3, target);
        process_window(first, last);
        since_checkpoint += last - first + 1;
        if (checkpoint && since_checkpoint >= checkpoint_every) {
            save_checkpoint(*checkpoint);
            since_checkpoint = 0;
        }
    }
    if (checkpoint && since_checkpoint > 0) save_checkpoint(*checkpoint);
    elapsed_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return complete();
}

ScanReport Scanner::report() const {
    ScanReport r;
    r.field = field_;
    r.config = config_;
    r.per_trace = per_trace_;
    r.last_trace = last_trace_;
    r.complete = complete();
    r.elapsed_seconds = elapsed_;
    for (const TraceTally& t : per_trace_) {
        for (const auto& [len, n] : t.counts) r.counts[len] += n;
        r.exceeds_cap += t.exceeds_cap;
    }
    r.max_length = r.counts.empty() ? 0 : r.counts.rbegin()->first;
    const std::size_t keep = static_cast<std::size_t>(config_.witness_retention);
    for (Int trace = 1; trace <= last_trace_ && keep > 0; ++trace) {
        for (const Entry& e : table_[static_cast<std::size_t>(trace)]) {
            if (e.length > config_.length_cap) continue;
            auto& list = r.witnesses[e.length];
            if (list.size() < keep) list.push_back(Quad{trace, e.b, e.c, e.d});
        }
    }
    return r;
}

void Scanner::save_checkpoint(const std::filesystem::path& path) const {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CheckpointError("cannot write checkpoint " + tmp.string());
        const bool with_exceeds = config_.length_cap < 7;
        out << config_json(*field_, config_).dump() << '\n';
        out << json{{"cursor", {{"last_trace", last_trace_}, {"partial", 0}}}}.dump() << '\n';
        for (const TraceTally& t : per_trace_) out << tally_json(t, with_exceeds).dump() << '\n';
        std::size_t tables = 0;
        for (Int trace = 1; trace <= last_trace_; ++trace) {
            const auto& row = table_[static_cast<std::size_t>(trace)];
            if (row.empty()) continue;
            json entries = json::array();
            for (const Entry& e : row) entries.push_back({e.b, e.c, e.d, e.length});
            out << json{{"table", trace}, {"entries", entries}}.dump() << '\n';
            ++tables;
        }
        out << json{{"end", {{"traces", per_trace_.size()}, {"tables", tables}}}}.dump() << '\n';
        if (!out) throw CheckpointError("failed writing checkpoint " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

Scanner Scanner::resume(FieldPtr field, ScanConfig config, const std::filesystem::path& checkpoint, unsigned threads) {
    std::ifstream in(checkpoint, std::ios::binary);
    if (!in) throw CheckpointError("cannot open checkpoint " + checkpoint.string());
    Scanner sc(std::move(field), config, threads);
    std::string line;
    std::size_t lineno = 0;
    bool have_config = false, have_cursor = false, have_end = false;
    std::size_t traces = 0, tables = 0;
    try {
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            if (have_end) throw CheckpointError("corrupt checkpoint: data after end marker");
            const json j = json::parse(line);
            if (j.contains("config")) {
                validate_config(j.at("config"), *sc.field_, sc.config_);
                have_config = true;
            } else if (!have_config) {
                throw CheckpointError("corrupt checkpoint: missing config header");
            } else if (j.contains("cursor")) {
                sc.last_trace_ = j.at("cursor").at("last_trace").get<Int>();
                if (sc.last_trace_ < 0 || sc.last_trace_ > sc.config_.trace_bound) {
                    throw CheckpointError("corrupt checkpoint: cursor out of range");
                }
                have_cursor = true;
            } else if (j.contains("trace")) {
                TraceTally t;
                t.trace = j.at("trace").get<Int>();
                for (const auto& [k, n] : j.at("counts").items()) t.counts[std::stoi(k)] = n.get<std::uint64_t>();
                if (j.contains("exceeds_cap")) t.exceeds_cap = j.at("exceeds_cap").get<std::uint64_t>();
                sc.per_trace_.push_back(std::move(t));
                ++traces;
            } else if (j.contains("table")) {
                const Int trace = j.at("table").get<Int>();
                if (!have_cursor || trace < 1 || trace > sc.last_trace_) {
                    throw CheckpointError("corrupt checkpoint: table row outside processed range");
                }
                auto& row = sc.table_[static_cast<std::size_t>(trace)];
                for (const auto& e : j.at("entries")) {
                    row.push_back({e.at(0).get<Int>(), e.at(1).get<Int>(), e.at(2).get<Int>(),
                                   e.at(3).get<std::uint8_t>()});
                }
                ++tables;
            } else if (j.contains("end")) {
                if (j.at("end").at("traces").get<std::size_t>() != traces ||
                    j.at("end").at("tables").get<std::size_t>() != tables) {
                    throw CheckpointError("corrupt checkpoint: line counts do not match end marker");
                }
                have_end = true;
            } else {
                throw CheckpointError("corrupt checkpoint: unrecognized line " + std::to_string(lineno));
            }
        }
    } catch (const json::exception& e) {
        throw CheckpointError("corrupt checkpoint at line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw CheckpointError("corrupt checkpoint at line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!have_config || !have_cursor || !have_end) throw CheckpointError("corrupt checkpoint: truncated file");
    return sc;
}

ScanReport scan_lengths(FieldPtr field, ScanConfig config, unsigned threads) {
    Scanner sc(std::move(field), config, threads);
    sc.run();
    return sc.report();
}

}  // namespace pythlab
