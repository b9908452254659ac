#include "flvbridge/reassembler.hpp"

#include "flvbridge/errors.hpp"

namespace bridge::xflv {

Reassembler::Reassembler(Options opts) : opts_(opts) {
    if (opts_.reorder_window < 1)
        opts_.reorder_window = 1;
}

ReassemblyEvent Reassembler::ignore(IgnoreReason reason, uint32_t seq) {
    switch (reason) {
    case IgnoreReason::BadMagic:
        stats_.chunks_rejected_magic++;
        break;
    case IgnoreReason::Truncated:
    case IgnoreReason::Malformed:
        stats_.chunks_rejected_malformed++;
        break;
    default:
        stats_.chunks_ignored++;
        break;
    }
    return Ignored{reason, seq};
}

ReassemblyEvents Reassembler::push(BytesView payload) {
    ReassemblyEvents out;

    XflvChunk c;
    try {
        c = parse_chunk(payload);
    } catch (const BadMagic&) {
        out.push_back(ignore(IgnoreReason::BadMagic, 0));
        return out;
    } catch (const TruncatedChunk&) {
        out.push_back(ignore(IgnoreReason::Truncated, 0));
        return out;
    }

    // Header sanity before the chunk may touch any state.
    if (c.body.size() > kChunkBodyLimit) {
        out.push_back(ignore(IgnoreReason::Malformed, c.seq));
        return out;
    }
    if (c.cseq == 0
        && (*c.total_size < kAssembledHeaderSize + 1 || c.body.size() > *c.total_size)) {
        out.push_back(ignore(IgnoreReason::Malformed, c.seq));
        return out;
    }

    if (poisoned_seq_ && c.seq == *poisoned_seq_) {
        out.push_back(ignore(IgnoreReason::PoisonedSeq, c.seq));
        return out;
    }

    if (!current_seq_) {
        // Fresh receiver. A non-first chunk means we came up mid-message (or
        // the first chunk is already gone); nothing of that seq is usable.
        if (c.cseq != 0) {
            poisoned_seq_ = c.seq;
            current_seq_ = c.seq;
            stats_.messages_poisoned++;
            out.push_back(ignore(IgnoreReason::PoisonedSeq, c.seq));
            return out;
        }
        start_message(c, out);
        return out;
    }

    if (c.seq == *current_seq_) {
        if (!assembling_) {
            out.push_back(ignore(IgnoreReason::DuplicateChunk, c.seq));
            return out;
        }
        accept_chunk(c, out);
        return out;
    }

    if (!seq_newer(c.seq, *current_seq_)) {
        out.push_back(ignore(IgnoreReason::StaleSeq, c.seq));
        return out;
    }

    // A newer message: whatever is still in flight cannot complete any more.
    if (assembling_) {
        uint32_t old = *current_seq_;
        discard_current();
        out.push_back(DiscardedLoss{old});
    }
    if (c.cseq == 0) {
        start_message(c, out);
    } else {
        // Missed the first chunk of this seq. The loss is reported once,
        // here; every further chunk of the seq is ignored.
        poisoned_seq_ = c.seq;
        current_seq_ = c.seq;
        awaiting_keyframe_ = true; // kind unknowable without chunk 0
        stats_.messages_discarded++;
        out.push_back(DiscardedLoss{c.seq});
    }
    return out;
}

void Reassembler::start_message(const XflvChunk& c, ReassemblyEvents& out) {
    current_seq_ = c.seq;
    assembling_ = true;
    expected_total_ = *c.total_size;
    chunks_.clear();
    chunks_.emplace(uint16_t{0}, c.body);
    received_bytes_ = c.body.size();
    if (received_bytes_ == expected_total_)
        finish_assembly(out);
    else
        out.push_back(NeedMore{});
}

void Reassembler::accept_chunk(const XflvChunk& c, ReassemblyEvents& out) {
    if (chunks_.count(c.cseq)) {
        out.push_back(ignore(IgnoreReason::DuplicateChunk, c.seq));
        return;
    }

    const uint16_t max_cseq =
        static_cast<uint16_t>((expected_total_ + kChunkBodyLimit - 1) / kChunkBodyLimit - 1);
    if (c.cseq > max_cseq) {
        out.push_back(ignore(IgnoreReason::Malformed, c.seq));
        return;
    }

    // Lowest cseq still missing; everything below it is present.
    uint16_t next_missing = 0;
    for (const auto& [cseq, body] : chunks_) {
        if (cseq != next_missing)
            break;
        ++next_missing;
    }

    const uint32_t gap = c.cseq - next_missing;
    if (gap >= static_cast<uint32_t>(opts_.reorder_window)) {
        // The hole at next_missing can no longer fill inside the window.
        uint32_t seq = *current_seq_;
        discard_current();
        out.push_back(DiscardedLoss{seq});
        return;
    }

    received_bytes_ += c.body.size();
    chunks_.emplace(c.cseq, c.body);

    if (received_bytes_ > expected_total_) {
        uint32_t seq = *current_seq_;
        discard_current();
        out.push_back(DiscardedLoss{seq});
        return;
    }
    if (received_bytes_ == expected_total_) {
        if (chunks_.size() != static_cast<size_t>(max_cseq) + 1) {
            uint32_t seq = *current_seq_;
            discard_current();
            out.push_back(DiscardedLoss{seq});
            return;
        }
        finish_assembly(out);
        return;
    }
    out.push_back(NeedMore{});
}

void Reassembler::finish_assembly(ReassemblyEvents& out) {
    Bytes assembled;
    assembled.reserve(expected_total_);
    for (const auto& [cseq, body] : chunks_)
        assembled.insert(assembled.end(), body.begin(), body.end());

    const uint32_t seq = *current_seq_;
    assembling_ = false;
    chunks_.clear();
    received_bytes_ = 0;

    MediaMessage msg;
    try {
        msg = decode_assembled(assembled);
    } catch (const MalformedMessage&) {
        // The header lied about itself; treat like a lost message.
        stats_.messages_discarded++;
        if (get_u32be(assembled, 0) != kAudioTypeCode)
            awaiting_keyframe_ = true;
        out.push_back(DiscardedLoss{seq});
        return;
    }

    if (msg.kind() == MessageKind::Video && awaiting_keyframe_) {
        if (classify_frame(msg) != FrameKind::VideoKey) {
            stats_.video_gated++;
            out.push_back(DiscardedGated{seq});
            return;
        }
        awaiting_keyframe_ = false;
    }
    stats_.messages_delivered++;
    out.push_back(Delivered{std::move(msg)});
}

void Reassembler::discard_current() {
    auto kind = current_kind();
    if (!kind || *kind != MessageKind::Audio)
        awaiting_keyframe_ = true;
    assembling_ = false;
    chunks_.clear();
    received_bytes_ = 0;
    stats_.messages_discarded++;
}

std::optional<MessageKind> Reassembler::current_kind() const {
    auto it = chunks_.find(0);
    if (it == chunks_.end() || it->second.size() < 4)
        return std::nullopt;
    uint32_t type = get_u32be(it->second, 0);
    return type == kAudioTypeCode ? MessageKind::Audio : MessageKind::Video;
}

} // namespace bridge::xflv
