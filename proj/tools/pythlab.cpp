#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pythlab/element.hpp"
#include "pythlab/repr_search.hpp"
#include "pythlab/scanner.hpp"
#include "pythlab/witnesses.hpp"

namespace {

using namespace pythlab;
using json = nlohmann::ordered_json;

enum Exit : int {
    kOk = 0,
    kMismatch = 1,
    kBadInput = 2,
    kKnownException = 3,
    kCheckpoint = 4,
    kInternal = 5,
};

struct Options {
    std::string field;
    std::string elem;
    int cap = kPythagorasBound;
    Int trace_bound = 0;
    int retention = 3;
    int max_squares = kPythagorasBound;
    std::size_t limit = 1000;
    std::string out;
    bool resume = false;
    unsigned threads = 0;
    std::optional<Int> stop_after;
    Int witness_m = 0;
    Int witness_s = 0;
    bool verify = false;
    bool json = false;
};

// One line on stderr: "error: <kind>: <message>", or a JSON object with --json.
int fail(const Options& opt, int code, std::string_view kind, const std::string& message) {
    if (opt.json) {
        std::cerr << json{{"error", kind}, {"message", message}, {"exit", code}}.dump() << '\n';
    } else {
        std::cerr << "error: " << kind << ": " << message << '\n';
    }
    return code;
}

FieldPtr parse_field(const std::string& spec) {
    const auto comma = spec.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("field spec '" + spec + "' must be p,q");
    std::size_t used = 0;
    const std::string ps = spec.substr(0, comma);
    const std::string qs = spec.substr(comma + 1);
    const Int p = std::stoll(ps, &used);
    if (used != ps.size()) throw std::invalid_argument("field spec '" + spec + "' must be p,q");
    const Int q = std::stoll(qs, &used);
    if (used != qs.size()) throw std::invalid_argument("field spec '" + spec + "' must be p,q");
    return make_field(p, q);
}

json quad_json(const Quad& q) { return json::array({q.a, q.b, q.c, q.d}); }

json representation_json(const Representation& rep) {
    json items = json::array();
    for (const Element& x : rep.items) items.push_back(quad_json(x.coords()));
    return items;
}

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("PYTHLAB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return static_cast<unsigned>(n);
    }
    return 1;
}

int cmd_info(const Options& opt) {
    const FieldPtr f = parse_field(opt.field);
    if (opt.json) {
        json basis = json::array();
        for (const Quad& b : f->basis()) basis.push_back(quad_json(b));
        std::cout << json{{"m", f->m()}, {"s", f->s()}, {"t", f->t()}, {"g", f->g()},
                          {"basis_type", to_string(f->basis_type())}, {"basis", basis}}
                         .dump()
                  << '\n';
        return kOk;
    }
    std::cout << "K(" << f->m() << "," << f->s() << ")  m=" << f->m() << " s=" << f->s() << " t=" << f->t()
              << " g=" << f->g() << '\n';
    std::cout << "basis type " << to_string(f->basis_type()) << " (quarter-coordinates):\n";
    for (const Quad& b : f->basis()) std::cout << "  [" << format_quad(b) << "]\n";
    return kOk;
}

int cmd_length(const Options& opt) {
    const FieldPtr f = parse_field(opt.field);
    const Element alpha = Element::parse(f, opt.elem);
    const LengthOutcome out = length(alpha, opt.cap);
    if (opt.json) {
        json j{{"field", {f->m(), f->s()}}, {"element", quad_json(alpha.coords())}, {"kind", to_string(out.kind)}};
        if (out.kind == LengthKind::Exact || out.kind == LengthKind::ExceedsCap) j["value"] = out.value;
        if (out.witness) j["witness"] = representation_json(*out.witness);
        std::cout << j.dump() << '\n';
        return kOk;
    }
    std::cout << out.to_string() << '\n';
    if (out.witness) std::cout << "  " << alpha.to_string() << " = " << out.witness->to_string() << '\n';
    return kOk;
}

int cmd_witness(const Options& opt) {
    const WitnessRecord rec = witness(opt.witness_m, opt.witness_s);
    std::optional<LengthOutcome> verified;
    if (opt.verify) verified = length(rec.element, kPythagorasBound);
    const bool claim = rec.claims_length();
    const bool matched = !verified || !claim || verified->is_exact(rec.expected_length);

    if (opt.json) {
        json roots = json::array();
        for (const Element& x : rec.roots) roots.push_back(quad_json(x.coords()));
        json j{{"field", {rec.field->m(), rec.field->s()}},
               {"element", quad_json(rec.element.coords())},
               {"roots", roots},
               {"source", to_string(rec.source)},
               {"expected_length", rec.expected_length},
               {"caveat", rec.caveat ? json(to_string(*rec.caveat)) : json(nullptr)},
               {"in_verified_range", rec.in_verified_range}};
        if (verified) {
            j["verified"] = {{"kind", to_string(verified->kind)}, {"value", verified->value}, {"matched", matched}};
        }
        std::cout << j.dump() << '\n';
    } else {
        std::cout << rec.field->describe() << '\n';
        std::cout << "source " << to_string(rec.source) << '\n';
        std::cout << "element [" << rec.element.to_string() << "]\n";
        std::cout << "roots";
        for (const Element& x : rec.roots) std::cout << " [" << x.to_string() << "]";
        std::cout << '\n';
        if (rec.caveat) std::cout << "caveat " << to_string(*rec.caveat) << " (no length claim)\n";
        if (!rec.in_verified_range) std::cout << "outside the verified range of s (no length claim)\n";
        if (verified) {
            if (claim && matched) {
                std::cout << "verified length " << verified->value << '\n';
            } else if (claim) {
                std::cout << "verification FAILED: " << verified->to_string() << ", expected length "
                          << rec.expected_length << '\n';
            } else {
                std::cout << "computed " << verified->to_string() << '\n';
            }
        }
    }
    if (!matched) {
        return fail(opt, kMismatch, "verification_mismatch",
                    "expected length " + std::to_string(rec.expected_length) + ", got " + verified->to_string());
    }
    return kOk;
}

int cmd_reps(const Options& opt) {
    const FieldPtr f = parse_field(opt.field);
    const Element alpha = Element::parse(f, opt.elem);
    const RepresentationList list = all_representations(alpha, opt.max_squares, opt.limit);
    if (opt.json) {
        json reps = json::array();
        for (const Representation& r : list.reps) reps.push_back(representation_json(r));
        std::cout << json{{"field", {f->m(), f->s()}},
                          {"element", quad_json(alpha.coords())},
                          {"count", list.reps.size()},
                          {"truncated", list.truncated},
                          {"representations", reps}}
                         .dump()
                  << '\n';
        return kOk;
    }
    std::cout << list.reps.size() << " representation(s) with at most " << opt.max_squares << " squares"
              << (list.truncated ? " (truncated)" : "") << '\n';
    for (const Representation& r : list.reps) std::cout << "  " << r.to_string() << '\n';
    return kOk;
}

int cmd_scan(const Options& opt) {
    const FieldPtr f = parse_field(opt.field);
    const ScanConfig config{opt.trace_bound, opt.cap, opt.retention};
    const unsigned threads = resolve_threads(opt.threads);
    std::optional<std::filesystem::path> ckpt;
    if (!opt.out.empty()) ckpt = opt.out + ".ckpt";

    Scanner scanner = (opt.resume && ckpt && std::filesystem::exists(*ckpt))
                          ? Scanner::resume(f, config, *ckpt, threads)
                          : Scanner(f, config, threads);
    const Int resumed_from = scanner.last_trace();
    const bool done = scanner.run(opt.stop_after, ckpt ? &*ckpt : nullptr);
    const ScanReport report = scanner.report();

    if (!opt.out.empty()) {
        const std::string tmp = opt.out + ".tmp";
        {
            std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
            if (!file) return fail(opt, kBadInput, "io", "cannot write " + opt.out);
            file << report.to_jsonl();
        }
        std::filesystem::rename(tmp, opt.out);
        if (done && ckpt) std::filesystem::remove(*ckpt);
    }

    if (opt.json) {
        json counts = json::object();
        for (const auto& [k, n] : report.counts) counts[std::to_string(k)] = n;
        json j{{"field", {f->m(), f->s()}}, {"trace_bound", config.trace_bound}, {"last_trace", report.last_trace},
               {"complete", report.complete}, {"max_length", report.max_length}, {"counts", counts}};
        if (config.length_cap < kPythagorasBound) j["exceeds_cap"] = report.exceeds_cap;
        if (resumed_from > 0) j["resumed_from"] = resumed_from;
        j["elapsed_seconds"] = report.elapsed_seconds;
        std::cout << j.dump() << '\n';
        return kOk;
    }
    std::cout << f->describe() << '\n';
    if (resumed_from > 0) std::cout << "resumed after trace " << resumed_from << '\n';
    std::cout << "traces 1.." << report.last_trace << (report.complete ? "" : " (incomplete)") << ": max length "
              << report.max_length << '\n';
    for (const auto& [k, n] : report.counts) std::cout << "  length " << k << ": " << n << '\n';
    if (config.length_cap < kPythagorasBound) {
        std::cout << "  length > " << config.length_cap << ": " << report.exceeds_cap << '\n';
    }
    for (const auto& [k, list] : report.witnesses) {
        std::cout << "  smallest of length " << k << ':';
        for (const Quad& q : list) std::cout << " [" << format_quad(q) << ']';
        std::cout << '\n';
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"Sums of squares in totally real biquadratic fields"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    auto add_json = [&](CLI::App* sub) { sub->add_flag("--json", opt.json, "Emit JSON"); };
    auto add_field = [&](CLI::App* sub) {
        sub->add_option("--field", opt.field, "Field generators p,q")->required();
    };
    auto add_elem = [&](CLI::App* sub) {
        sub->add_option("--elem", opt.elem, "Element a,b,c,d meaning (a + b√m + c√s + d√t)/4")->required();
    };

    auto* info = app.add_subcommand("info", "Describe K(p,q) and its integral basis");
    add_field(info);
    add_json(info);

    auto* len = app.add_subcommand("length", "Length of an element");
    add_field(len);
    add_elem(len);
    len->add_option("--cap", opt.cap, "Largest number of squares tried")->check(CLI::Range(1, 64));
    add_json(len);

    auto* wit = app.add_subcommand("witness", "Explicit length-6 candidate in K(m,s)");
    wit->add_option("m", opt.witness_m, "3, 6 or 7")->required();
    wit->add_option("s", opt.witness_s, "Second generator")->required();
    wit->add_flag("--verify", opt.verify, "Compute the length and compare with the claim");
    add_json(wit);

    auto* reps = app.add_subcommand("reps", "All representations as sums of squares");
    add_field(reps);
    add_elem(reps);
    reps->add_option("--max-squares", opt.max_squares, "Largest number of squares")->check(CLI::Range(1, 64));
    reps->add_option("--limit", opt.limit, "Stop after this many representations");
    add_json(reps);

    auto* scan = app.add_subcommand("scan", "Lengths of all totally positive elements up to a trace bound");
    add_field(scan);
    scan->add_option("--trace-bound", opt.trace_bound, "Largest trace")->required()->check(CLI::PositiveNumber);
    scan->add_option("--cap", opt.cap, "Length cap")->check(CLI::Range(1, 64));
    scan->add_option("--retention", opt.retention, "Witnesses kept per length")->check(CLI::NonNegativeNumber);
    scan->add_option("--out", opt.out, "Report file (JSON lines); checkpoint goes to <out>.ckpt");
    scan->add_flag("--resume", opt.resume, "Continue from <out>.ckpt if present");
    scan->add_option("--threads", opt.threads, "Worker threads (default $PYTHLAB_THREADS or 1)");
    scan->add_option("--stop-after-trace", opt.stop_after, "Stop early after this trace, keeping the checkpoint");
    add_json(scan);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(opt, kBadInput, "usage", e.what());
    }
    if (opt.resume && opt.out.empty()) return fail(opt, kBadInput, "usage", "--resume requires --out");

    try {
        if (*info) return cmd_info(opt);
        if (*len) return cmd_length(opt);
        if (*wit) return cmd_witness(opt);
        if (*reps) return cmd_reps(opt);
        if (*scan) return cmd_scan(opt);
    } catch (const KnownExceptionError& e) {
        if (opt.json) {
            std::cout << json{{"field", {opt.witness_m, opt.witness_s}}, {"caveat", "known_exception"}}.dump() << '\n';
        } else {
            std::cout << "K(" << opt.witness_m << "," << opt.witness_s << ") is a known conjectured exception\n";
        }
        return fail(opt, kKnownException, "known_exception", e.what());
    } catch (const CheckpointError& e) {
        return fail(opt, kCheckpoint, "checkpoint", e.what());
    } catch (const std::invalid_argument& e) {
        return fail(opt, kBadInput, "invalid_argument", e.what());
    } catch (const std::exception& e) {
        return fail(opt, kInternal, "internal", e.what());
    }
    return kBadInput;
}
