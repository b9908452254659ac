#include "flvbridge/trace.hpp"

#include <fstream>
#include <sstream>

#include "flvbridge/errors.hpp"
#include "flvbridge/xflv.hpp"

namespace bridge::sim {

namespace {

const char* frame_token(FrameKind f) {
    switch (f) {
    case FrameKind::AudioFrame: return "-";
    case FrameKind::VideoKey: return "key";
    case FrameKind::VideoInter: return "inter";
    case FrameKind::VideoOther: return "?";
    }
    return "?";
}

} // namespace

std::vector<TraceRecord> parse_trace(const std::string& text) {
    std::vector<TraceRecord> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    uint32_t last_time = 0;

    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream fields(line);
        std::string kind, frame;
        long long time = -1, size = -1;
        if (!(fields >> kind))
            continue; // blank line
        auto fail = [&](const std::string& why) {
            throw ConfigError("trace line " + std::to_string(lineno) + ": " + why);
        };
        if (!(fields >> time >> frame >> size))
            fail("expected '<A|V> <time_ms> <key|inter|-> <size>'");
        std::string extra;
        if (fields >> extra)
            fail("trailing field '" + extra + "'");

        TraceRecord rec;
        if (kind == "A") {
            rec.kind = MessageKind::Audio;
            rec.frame = FrameKind::AudioFrame;
            if (frame != "-")
                fail("audio rows take '-' in the frame column");
        } else if (kind == "V") {
            rec.kind = MessageKind::Video;
            if (frame == "key")
                rec.frame = FrameKind::VideoKey;
            else if (frame == "inter")
                rec.frame = FrameKind::VideoInter;
            else
                fail("video frame must be 'key' or 'inter'");
        } else {
            fail("kind must be 'A' or 'V'");
        }
        if (time < 0 || time > 0xffffffffLL)
            fail("time out of range");
        rec.time_ms = static_cast<uint32_t>(time);
        if (rec.time_ms < last_time)
            fail("times must be non-decreasing");
        last_time = rec.time_ms;
        if (size < 1 || size > static_cast<long long>(xflv::kMaxDataSize))
            fail("size must be within 1.." + std::to_string(xflv::kMaxDataSize));
        rec.size = static_cast<uint32_t>(size);
        out.push_back(rec);
    }
    return out;
}

std::vector<TraceRecord> load_trace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open trace file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_trace(buf.str());
}

std::string format_trace(const std::vector<TraceRecord>& records) {
    std::ostringstream out;
    for (const auto& r : records)
        out << (r.kind == MessageKind::Audio ? 'A' : 'V') << ' ' << r.time_ms << ' '
            << frame_token(r.frame) << ' ' << r.size << '\n';
    return out.str();
}

MediaMessage synth_message(const TraceRecord& rec, uint32_t speex_rate, std::mt19937_64& rng) {
    Bytes data;
    data.reserve(rec.size);
    if (rec.kind == MessageKind::Audio) {
        data.push_back(speex_rate == 8000 ? kSpeexTag8k : kSpeexTag16k);
    } else {
        switch (rec.frame) {
        case FrameKind::VideoKey: data.push_back(0x12); break;
        case FrameKind::VideoInter: data.push_back(0x22); break;
        default: data.push_back(0x32); break;
        }
    }
    std::uniform_int_distribution<int> byte(0, 255);
    while (data.size() < rec.size)
        data.push_back(static_cast<uint8_t>(byte(rng)));

    return rec.kind == MessageKind::Audio ? MediaMessage::audio(rec.time_ms, std::move(data))
                                          : MediaMessage::video(rec.time_ms, std::move(data));
}

TraceRecord record_of(const MediaMessage& msg) {
    TraceRecord rec;
    rec.kind = msg.kind();
    rec.time_ms = msg.time_ms;
    rec.frame = classify_frame(msg);
    rec.size = static_cast<uint32_t>(msg.data.size());
    return rec;
}

} // namespace bridge::sim
