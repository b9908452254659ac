#include "flvbridge/xflv.hpp"

#include "flvbridge/errors.hpp"

namespace bridge::xflv {

AssembledMessage encode_assembled(const MediaMessage& msg) {
    if (msg.data.size() > kMaxDataSize)
        throw MessageTooLarge("media message data part exceeds " + std::to_string(kMaxDataSize)
                              + " bytes");
    AssembledMessage a;
    a.bytes.reserve(kAssembledHeaderSize + msg.data.size());
    put_u32be(a.bytes, msg.type_code);
    put_u32be(a.bytes, static_cast<uint32_t>(msg.data.size()));
    put_u32be(a.bytes, msg.time_ms);
    a.bytes.insert(a.bytes.end(), msg.data.begin(), msg.data.end());
    return a;
}

MediaMessage decode_assembled(BytesView assembled) {
    if (assembled.size() < kAssembledHeaderSize + 1)
        throw MalformedMessage("assembled message shorter than header plus one data byte");
    uint32_t type = get_u32be(assembled, 0);
    uint32_t size = get_u32be(assembled, 4);
    uint32_t time = get_u32be(assembled, 8);
    if (size != assembled.size() - kAssembledHeaderSize)
        throw MalformedMessage("assembled size field disagrees with actual length");
    if (type != kAudioTypeCode && type != kVideoTypeCode)
        throw MalformedMessage("assembled type is not an audio/video message code");
    MediaMessage msg;
    msg.type_code = type;
    msg.time_ms = time;
    msg.data.assign(assembled.begin() + kAssembledHeaderSize, assembled.end());
    return msg;
}

std::vector<XflvChunk> make_chunks(const AssembledMessage& a, uint32_t seq) {
    const size_t len = a.bytes.size();
    const size_t count = (len + kChunkBodyLimit - 1) / kChunkBodyLimit;
    std::vector<XflvChunk> chunks;
    chunks.reserve(count);
    for (size_t i = 0; i < count; ++i) {
        XflvChunk c;
        c.seq = seq;
        c.cseq = static_cast<uint16_t>(i);
        if (i == 0)
            c.total_size = static_cast<uint16_t>(len);
        size_t begin = i * kChunkBodyLimit;
        size_t end = std::min(begin + kChunkBodyLimit, len);
        c.body.assign(a.bytes.begin() + begin, a.bytes.begin() + end);
        chunks.push_back(std::move(c));
    }
    return chunks;
}

Bytes serialize_chunk(const XflvChunk& c) {
    Bytes out;
    out.reserve((c.cseq == 0 ? kFirstChunkHeaderSize : kLaterChunkHeaderSize) + c.body.size());
    put_u32be(out, kMagic);
    put_u32be(out, c.seq);
    put_u16be(out, c.cseq);
    if (c.cseq == 0)
        put_u16be(out, c.total_size.value());
    out.insert(out.end(), c.body.begin(), c.body.end());
    return out;
}

XflvChunk parse_chunk(BytesView payload) {
    if (payload.size() < 4)
        throw TruncatedChunk("chunk shorter than the magic word");
    if (get_u32be(payload, 0) != kMagic)
        throw BadMagic("chunk does not start with the RTMP magic word");
    if (payload.size() < kLaterChunkHeaderSize)
        throw TruncatedChunk("chunk shorter than its header");
    XflvChunk c;
    c.seq = get_u32be(payload, 4);
    c.cseq = get_u16be(payload, 8);
    size_t header = kLaterChunkHeaderSize;
    if (c.cseq == 0) {
        if (payload.size() < kFirstChunkHeaderSize)
            throw TruncatedChunk("first chunk shorter than its header");
        c.total_size = get_u16be(payload, 10);
        header = kFirstChunkHeaderSize;
    }
    c.body.assign(payload.begin() + header, payload.end());
    return c;
}

} // namespace bridge::xflv
