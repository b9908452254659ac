#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "flvbridge/media_message.hpp"
#include "flvbridge/xflv.hpp"

namespace bridge::xflv {

// Receiver-side outcomes. A push never fails; everything that can go wrong
// is one of these events.
struct NeedMore {};

struct Delivered {
    MediaMessage message;
};

struct DiscardedLoss {
    uint32_t seq = 0;
};

struct DiscardedGated {
    uint32_t seq = 0;
};

enum class IgnoreReason {
    BadMagic,      // payload does not lead with "RTMP"
    Truncated,     // payload shorter than its chunk header
    Malformed,     // chunk header fields are internally inconsistent
    PoisonedSeq,   // first chunk of this seq was never seen
    StaleSeq,      // chunk of an older message
    DuplicateChunk // cseq already received (or message already finished)
};

struct Ignored {
    IgnoreReason reason = IgnoreReason::BadMagic;
    uint32_t seq = 0; // 0 when the payload was too broken to read one
};

using ReassemblyEvent = std::variant<NeedMore, Delivered, DiscardedLoss, DiscardedGated, Ignored>;

// One push usually yields one event; finishing off a dead message while a
// new one starts yields two, older seq first.
using ReassemblyEvents = std::vector<ReassemblyEvent>;

struct ReassemblyStats {
    uint64_t messages_delivered = 0;
    uint64_t messages_discarded = 0; // chunk loss, incl. detected missed first chunks
    uint64_t video_gated = 0;        // complete but dropped awaiting a key frame
    uint64_t chunks_rejected_magic = 0;
    uint64_t chunks_rejected_malformed = 0;
    uint64_t chunks_ignored = 0;      // poisoned/stale/duplicate
    uint64_t messages_poisoned = 0;   // seqs poisoned on a fresh receiver
};

// Per-session receive state machine for x-flv payloads: collects chunks of
// the current message, detects losses via seq/cseq, and gates video behind
// the next key frame after any discard. Single-owner; never shared across
// threads.
class Reassembler {
public:
    struct Options {
        // Chunks up to window-1 positions ahead of the next missing cseq are
        // buffered; 1 means strictly in-order within a message.
        int reorder_window = 1;
    };

    Reassembler() = default;
    explicit Reassembler(Options opts);

    // Consumes one RTP payload. Total: never throws.
    ReassemblyEvents push(BytesView payload);

    bool awaiting_keyframe() const { return awaiting_keyframe_; }
    std::optional<uint32_t> current_seq() const { return current_seq_; }
    const ReassemblyStats& stats() const { return stats_; }

private:
    ReassemblyEvent ignore(IgnoreReason reason, uint32_t seq);
    void start_message(const XflvChunk& c, ReassemblyEvents& out);
    void accept_chunk(const XflvChunk& c, ReassemblyEvents& out);
    void finish_assembly(ReassemblyEvents& out);
    void discard_current();
    std::optional<MessageKind> current_kind() const;

    Options opts_;
    std::optional<uint32_t> current_seq_;
    bool assembling_ = false;
    uint16_t expected_total_ = 0;
    std::map<uint16_t, Bytes> chunks_; // cseq -> body, current message only
    size_t received_bytes_ = 0;
    std::optional<uint32_t> poisoned_seq_;
    bool awaiting_keyframe_ = true; // fresh receivers wait for the first key frame
    ReassemblyStats stats_;
};

} // namespace bridge::xflv
