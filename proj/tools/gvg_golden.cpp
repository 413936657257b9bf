// Writes the protocol golden transcripts. Each transcript line is "> request"
// or "< reply". Regenerate only when the wire format changes on purpose.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "gvg/server.hpp"

namespace {

using nlohmann::json;

class Recorder {
public:
    explicit Recorder(std::shared_ptr<const gvg::Corpus> corpus) : session_(std::move(corpus), gvg::ServerConfig{}, [] { return 0; }) {}

    json send(const std::string& line) {
        std::string reply = session_.handle_line(line);
        out_ += "> " + line + "\n< " + reply + "\n";
        return json::parse(reply);
    }
    json send_json(const json& msg) { return send(gvg::dump_message(msg)); }

    const std::string& text() const { return out_; }

private:
    gvg::Session session_;
    std::string out_;
};

std::string random_session(const std::shared_ptr<const gvg::Corpus>& corpus) {
    Recorder r(corpus);
    gvg::Rng rng(20240601);
    r.send_json(json{{"type", "hello"}});
    const auto ids = corpus->ids();
    std::size_t game = 0;
    std::uint64_t seed = 7;
    json state = r.send_json(json{{"type", "reset"}, {"game", ids[game]}, {"level", 0}, {"seed", seed}});
    for (int step = 0; step < 1000; ++step) {
        if (state["done"].get<bool>()) {
            game = (game + 1) % ids.size();
            ++seed;
            state = r.send_json(json{{"type", "reset"}, {"game", ids[game]}, {"level", static_cast<int>(seed % 2)}, {"seed", seed}});
        }
        const auto& legal = state["info"]["actions"];
        auto pick = rng.uniform(static_cast<std::uint32_t>(legal.size()));
        // alternate between names and indices
        json action = rng.uniform(2) ? json(legal[pick]) : json(pick);
        state = r.send_json(json{{"type", "step"}, {"action", action}});
    }
    r.send_json(json{{"type", "goodbye"}});
    return r.text();
}

std::string error_session(const std::shared_ptr<const gvg::Corpus>& corpus) {
    Recorder r(corpus);
    r.send("");
    r.send("not json");
    r.send("[1,2,3]");
    r.send(R"({"type":42})");
    r.send(R"({"type":"dance"})");
    r.send(R"({"type":"step","action":"UP"})");
    r.send(R"({"type":"abort"})");
    r.send(R"({"type":"reset"})");
    r.send(R"({"type":"reset","game":"pong"})");
    r.send(R"({"type":"reset","game":"frogs","level":99})");
    r.send(R"({"type":"reset","game":"frogs","seed":-1})");
    r.send(R"({"type":"reset","game":"frogs","obs_mode":"smell"})");
    r.send(R"({"type":"hello","extra":{"ignored":true}})");
    r.send(R"({"type":"reset","game":"aliens","seed":3,"unknown_field":1})");
    r.send(R"({"type":"step","action":"UP"})");
    r.send(R"({"type":"step","action":9})");
    r.send(R"({"type":"step","action":[1]})");
    r.send(R"({"type":"step"})");
    r.send(R"({"type":"step","action":"USE"})");
    r.send(R"({"type":"reset","game":"zelda","level":1,"seed":3})");
    r.send(R"({"type":"abort"})");
    r.send(R"({"type":"step","action":"NIL"})");
    r.send(R"({"type":"goodbye"})");
    r.send(R"({"type":"hello"})");
    return r.text();
}

std::string pixel_session(const std::shared_ptr<const gvg::Corpus>& corpus) {
    Recorder r(corpus);
    r.send(R"({"type":"reset","game":"wait_for_breakfast","seed":1,"obs_mode":"both"})");
    for (const char* a : {"RIGHT", "DOWN", "NIL"}) r.send_json(json{{"type", "step"}, {"action", a}});
    r.send(R"({"type":"reset","game":"frogs","seed":2,"obs_mode":"pixels"})");
    r.send(R"({"type":"step","action":"UP"})");
    return r.text();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: gvg_golden OUT_DIR\n";
        return 1;
    }
    std::filesystem::path dir = argv[1];
    std::filesystem::create_directories(dir);
    auto corpus = std::make_shared<const gvg::Corpus>(gvg::Corpus::load());
    const std::pair<const char*, std::string> files[] = {
        {"random_session.txt", random_session(corpus)},
        {"error_session.txt", error_session(corpus)},
        {"pixel_session.txt", pixel_session(corpus)},
    };
    for (const auto& [name, text] : files) {
        std::ofstream out(dir / name, std::ios::binary);
        out << text;
        if (!out) {
            std::cerr << "cannot write " << (dir / name) << '\n';
            return 1;
        }
        std::cout << (dir / name).string() << " " << text.size() << " bytes\n";
    }
    return 0;
}
