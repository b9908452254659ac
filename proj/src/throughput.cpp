#include "flvbridge/throughput.hpp"

#include <chrono>
#include <vector>

#include "flvbridge/reassembler.hpp"
#include "flvbridge/rtp.hpp"
#include "flvbridge/xflv.hpp"

namespace bridge::sim {

namespace {

// One call's worth of work; fully self-contained so calls can run on any
// thread.
uint64_t run_call(int packets, uint64_t salt) {
    uint32_t message_seq = 0;
    rtp::Sequencer rtp_seq(static_cast<uint16_t>(salt));
    xflv::Reassembler rx;
    uint64_t delivered = 0;

    // A 20 ms Speex frame with container tag, roughly what a call carries.
    Bytes data(161);
    data[0] = kSpeexTag16k;
    for (std::size_t i = 1; i < data.size(); ++i)
        data[i] = static_cast<uint8_t>(salt + i * 31);

    const rtp::TsClock clock(90000);
    const uint32_t ssrc = static_cast<uint32_t>(salt * 2654435761u);

    for (int i = 0; i < packets; ++i) {
        MediaMessage msg = MediaMessage::audio(static_cast<uint32_t>(i) * 20, data);
        const auto assembled = xflv::encode_assembled(msg);
        const auto chunks = xflv::make_chunks(assembled, message_seq++);
        const uint32_t ts = rtp::ms_to_ts(msg.time_ms, clock);
        for (const auto& chunk : chunks) {
            const Bytes wire = rtp::serialize_packet(
                rtp::packetize(xflv::serialize_chunk(chunk), rtp::kXflvPayloadType, rtp_seq, ts,
                               ssrc));
            const rtp::RtpPacket p = rtp::depacketize(wire);
            for (const auto& ev : rx.push(p.payload))
                if (std::holds_alternative<xflv::Delivered>(ev))
                    ++delivered;
        }
    }
    return delivered;
}

} // namespace

ThroughputResult run_throughput(int calls, int packets_per_call, int threads) {
    ThroughputResult r;
    r.calls = calls;
    r.packets_per_call = packets_per_call;

    std::vector<uint64_t> delivered(static_cast<std::size_t>(calls), 0);
    const auto t0 = std::chrono::steady_clock::now();

    bool parallel = false;
#ifdef FLVBRIDGE_HAVE_OPENMP
    parallel = threads > 1;
#endif
    if (parallel) {
#ifdef FLVBRIDGE_HAVE_OPENMP
        r.threads = threads;
#pragma omp parallel for num_threads(threads) schedule(static)
        for (int i = 0; i < calls; ++i)
            delivered[static_cast<std::size_t>(i)] = run_call(packets_per_call, i);
#endif
    } else {
        (void)threads;
        r.threads = 1;
        for (int i = 0; i < calls; ++i)
            delivered[static_cast<std::size_t>(i)] = run_call(packets_per_call, i);
    }

    const auto t1 = std::chrono::steady_clock::now();
    r.seconds = std::chrono::duration<double>(t1 - t0).count();
    for (uint64_t d : delivered)
        r.delivered += d;
    r.total_packets = static_cast<uint64_t>(calls) * static_cast<uint64_t>(packets_per_call);
    r.packets_per_second = r.seconds > 0 ? static_cast<double>(r.total_packets) / r.seconds : 0.0;
    return r;
}

} // namespace bridge::sim
