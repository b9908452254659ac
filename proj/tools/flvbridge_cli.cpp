#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "flvbridge/errors.hpp"
#include "flvbridge/negotiation.hpp"
#include "flvbridge/reassembler.hpp"
#include "flvbridge/scenario.hpp"
#include "flvbridge/trace.hpp"
#include "flvbridge/xflv.hpp"

namespace {

using namespace bridge;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << content))
        throw ConfigError("cannot write '" + path + "'");
}

// Payload files hold the RTP payloads (serialized chunks): binary mode is
// u16 big-endian length + bytes per record, hex mode one line per record.
std::string encode_records(const std::vector<Bytes>& records, bool hex) {
    std::string out;
    for (const auto& r : records) {
        if (hex) {
            out += to_hex(r);
            out += '\n';
        } else {
            out.push_back(static_cast<char>(r.size() >> 8));
            out.push_back(static_cast<char>(r.size() & 0xff));
            out.append(r.begin(), r.end());
        }
    }
    return out;
}

std::vector<Bytes> decode_records(const std::string& blob, bool hex) {
    std::vector<Bytes> records;
    if (hex) {
        std::istringstream in(blob);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (!line.empty())
                records.push_back(from_hex(line));
        }
        return records;
    }
    std::size_t pos = 0;
    while (pos < blob.size()) {
        if (pos + 2 > blob.size())
            throw ConfigError("truncated record length at byte " + std::to_string(pos));
        const std::size_t len = (static_cast<uint8_t>(blob[pos]) << 8)
            | static_cast<uint8_t>(blob[pos + 1]);
        pos += 2;
        if (pos + len > blob.size())
            throw ConfigError("truncated record body at byte " + std::to_string(pos));
        records.emplace_back(blob.begin() + static_cast<long>(pos),
                             blob.begin() + static_cast<long>(pos + len));
        pos += len;
    }
    return records;
}

int cmd_pack(const std::string& trace_path, const std::string& out_path, bool hex,
             uint64_t seed, uint32_t rate) {
    const auto records = sim::load_trace(trace_path);
    std::mt19937_64 rng(seed);
    uint32_t seq = 0;
    std::vector<Bytes> payloads;
    for (const auto& rec : records) {
        const auto msg = sim::synth_message(rec, rate, rng);
        const auto chunks = xflv::make_chunks(xflv::encode_assembled(msg), seq++);
        for (const auto& c : chunks)
            payloads.push_back(xflv::serialize_chunk(c));
    }
    spit(out_path, encode_records(payloads, hex));
    std::cerr << records.size() << " messages -> " << payloads.size() << " payloads\n";
    return 0;
}

int cmd_unpack(const std::string& path, bool hex) {
    const auto payloads = decode_records(slurp(path), hex);
    xflv::Reassembler rx;
    std::vector<sim::TraceRecord> recovered;

    for (std::size_t i = 0; i < payloads.size(); ++i) {
        std::cout << '#' << i << ' ';
        xflv::XflvChunk chunk;
        try {
            chunk = xflv::parse_chunk(payloads[i]);
        } catch (const BadMagic&) {
            std::cout << "BAD MAGIC (" << payloads[i].size() << " bytes)\n";
            continue;
        } catch (const TruncatedChunk&) {
            std::cout << "TRUNCATED (" << payloads[i].size() << " bytes)\n";
            continue;
        }
        std::cout << "seq=" << chunk.seq << " cseq=" << chunk.cseq;
        if (chunk.total_size)
            std::cout << " total=" << *chunk.total_size;
        std::cout << " body=" << chunk.body.size();
        if (chunk.cseq == 0 && chunk.body.size() >= xflv::kAssembledHeaderSize + 1) {
            const uint32_t type = get_u32be(chunk.body, 0);
            const uint32_t time = get_u32be(chunk.body, 8);
            const uint8_t tag = chunk.body[12];
            if (type == kAudioTypeCode)
                std::cout << " audio time=" << time;
            else if (type == kVideoTypeCode)
                std::cout << " video time=" << time
                          << ((tag >> 4) == 1       ? " frame=key"
                                  : (tag >> 4) == 2 ? " frame=inter"
                                                    : " frame=?");
            else
                std::cout << " type=" << type;
        }
        std::cout << '\n';
        for (const auto& ev : rx.push(payloads[i]))
            if (const auto* d = std::get_if<xflv::Delivered>(&ev))
                recovered.push_back(sim::record_of(d->message));
    }

    std::cout << "-- reassembled trace --\n" << sim::format_trace(recovered);
    return 0;
}

int cmd_negotiate(const std::string& offer_path, uint32_t rate, uint64_t seed,
                  const std::vector<uint16_t>& fixed_ports) {
    const auto offer = sdp::parse_sdp(slurp(offer_path));

    std::unique_ptr<sdp::PortPicker> picker;
    if (!fixed_ports.empty())
        picker = std::make_unique<sdp::FixedPortPicker>(fixed_ports);
    else
        picker = std::make_unique<sdp::RandomPortPicker>(seed);

    const auto answer = sdp::answer_offer(offer, {rate}, *picker);
    if (!answer) {
        std::cout << "488\n";
        return 0;
    }
    std::cout << sdp::serialize_sdp(answer->sdp);
    return 0;
}

int cmd_simulate(const std::string& config_path, std::optional<uint64_t> seed, bool json) {
    auto cfg = sim::load_scenario(config_path);
    if (seed)
        cfg.seed = *seed;
    const auto stats = sim::run_scenario(cfg);
    std::cout << (json ? sim::stats_to_json(stats) : sim::stats_to_table(stats));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SIP<->RTMP media bridge toolkit"};
    app.require_subcommand(1);

    std::string trace_path, out_path, payload_path, offer_path, config_path;
    bool hex = false, json = false;
    uint64_t seed = 0;
    uint32_t rate = 16000;
    std::optional<uint64_t> sim_seed;
    std::vector<uint16_t> fixed_ports;

    auto* pack = app.add_subcommand("pack", "trace file -> x-flv RTP payload records");
    pack->add_option("trace", trace_path, "trace file (A|V <time_ms> <frame> <size>)")
        ->required();
    pack->add_option("--out", out_path, "output payload file")->required();
    pack->add_flag("--hex", hex, "write hex lines instead of binary records");
    pack->add_option("--seed", seed, "payload filler seed");
    pack->add_option("--rate", rate, "speex sampling rate (8000|16000)");

    auto* unpack = app.add_subcommand("unpack", "dissect payload records and reassemble");
    unpack->add_option("payloads", payload_path, "payload file from pack")->required();
    unpack->add_flag("--hex", hex, "input is hex lines");

    auto* negotiate = app.add_subcommand("negotiate", "answer an SDP offer (or print 488)");
    negotiate->add_option("--offer", offer_path, "SDP offer file")->required();
    negotiate->add_option("--rate", rate, "local speex sampling rate (8000|16000)");
    negotiate->add_option("--seed", seed, "port picker seed");
    negotiate->add_option("--ports", fixed_ports, "fixed local ports, e.g. --ports 22700 26498")
        ->expected(-1);

    auto* simulate = app.add_subcommand("simulate", "run a two-party scenario");
    simulate->add_option("--config", config_path, "scenario config file")->required();
    simulate->add_option("--seed", sim_seed, "override the config seed");
    simulate->add_flag("--json", json, "emit stats as JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (pack->parsed())
            return cmd_pack(trace_path, out_path, hex, seed, rate);
        if (unpack->parsed())
            return cmd_unpack(payload_path, hex);
        if (negotiate->parsed())
            return cmd_negotiate(offer_path, rate, seed, fixed_ports);
        if (simulate->parsed())
            return cmd_simulate(config_path, sim_seed, json);
    } catch (const bridge::ScenarioFailed& e) {
        std::cerr << "scenario failed: " << e.what() << '\n';
        return 3;
    } catch (const bridge::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
