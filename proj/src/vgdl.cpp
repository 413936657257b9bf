#include "gvg/vgdl.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <set>

namespace gvg {

namespace {

constexpr std::array<std::string_view, 4> kSections = {"SpriteSet", "InteractionSet", "TerminationSet",
                                                       "LevelMapping"};
constexpr int kMaxResourceTypes = 8;

struct Token {
    std::string_view text;
    int column = 0;  // 1-based
};

struct Line {
    int number = 0;
    int indent = 0;
    std::string_view content;  // comment stripped, trailing space trimmed, starts at `indent`
};

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    auto head = static_cast<unsigned char>(s[0]);
    if (!(std::isalpha(head) || s[0] == '_')) return false;
    return std::all_of(s.begin() + 1, s.end(), [](char c) {
        auto u = static_cast<unsigned char>(c);
        return std::isalnum(u) || c == '_';
    });
}

std::vector<Token> tokenize(std::string_view text, int base_column) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && text[i] == ' ') ++i;
        if (i >= text.size()) break;
        std::size_t j = i;
        while (j < text.size() && text[j] != ' ') ++j;
        out.push_back({text.substr(i, j - i), base_column + static_cast<int>(i)});
        i = j;
    }
    return out;
}

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> lines;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(pos, end - pos);
        ++number;
        pos = end + 1;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        if (auto tab = raw.find('\t'); tab != std::string_view::npos) {
            throw Error(ErrorKind::SyntaxError, "tab characters are not allowed", {number, static_cast<int>(tab) + 1});
        }
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        while (!raw.empty() && raw.back() == ' ') raw.remove_suffix(1);
        if (raw.empty()) {
            if (end == text.size()) break;
            continue;
        }
        std::size_t indent = raw.find_first_not_of(' ');
        lines.push_back({number, static_cast<int>(indent), raw.substr(indent)});
        if (end == text.size()) break;
    }
    return lines;
}

ParamValue parse_value(const ParamSpec& spec, std::string_view raw, SourceLoc loc) {
    auto bad = [&](std::string_view why) {
        return Error(ErrorKind::InvalidValue,
                     std::string(spec.key) + "=" + std::string(raw) + ": " + std::string(why), loc);
    };
    auto parse_int = [&]() {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
        if (ec != std::errc() || p != raw.data() + raw.size()) throw bad("expected an integer");
        return v;
    };
    auto parse_real = [&]() {
        double v = 0;
        auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
        if (ec != std::errc() || p != raw.data() + raw.size() || !std::isfinite(v)) throw bad("expected a number");
        return v;
    };
    switch (spec.type) {
        case ParamType::Bool:
            if (raw == "True" || raw == "true") return true;
            if (raw == "False" || raw == "false") return false;
            throw bad("expected True or False");
        case ParamType::Int: return parse_int();
        case ParamType::NonNegInt: {
            auto v = parse_int();
            if (v < 0) throw bad("must be >= 0");
            return v;
        }
        case ParamType::PositiveInt: {
            auto v = parse_int();
            if (v < 1) throw bad("must be >= 1");
            return v;
        }
        case ParamType::PositiveReal: {
            auto v = parse_real();
            if (v <= 0) throw bad("must be > 0");
            return v;
        }
        case ParamType::Probability: {
            auto v = parse_real();
            if (v < 0 || v > 1) throw bad("must lie in [0, 1]");
            return v;
        }
        case ParamType::SpriteRef:
        case ParamType::ResourceRef:
            if (!is_identifier(raw)) throw bad("expected a sprite identifier");
            return std::string(raw);
        case ParamType::Color:
            if (!parse_color(raw)) throw bad("unknown colour");
            return std::string(raw);
        case ParamType::Orientation:
            if (!parse_orientation(raw)) throw bad("expected UP, DOWN, LEFT or RIGHT");
            return std::string(raw);
        case ParamType::Text: return std::string(raw);
    }
    throw bad("unsupported parameter type");
}

ParamMap parse_params(std::span<const Token> tokens, std::span<const ParamSpec> specs, int line) {
    ParamMap out;
    for (const auto& tok : tokens) {
        SourceLoc loc{line, tok.column};
        auto eq = tok.text.find('=');
        if (eq == std::string_view::npos || eq == 0 || eq + 1 == tok.text.size()) {
            throw Error(ErrorKind::SyntaxError, "expected key=value, got '" + std::string(tok.text) + "'", loc);
        }
        auto key = tok.text.substr(0, eq);
        const ParamSpec* spec = find_param(specs, key);
        if (!spec) throw Error(ErrorKind::UnknownParameter, "unknown parameter '" + std::string(key) + "'", loc);
        if (out.count(std::string(key))) {
            throw Error(ErrorKind::SyntaxError, "duplicate parameter '" + std::string(key) + "'", loc);
        }
        out.emplace(std::string(key), parse_value(*spec, tok.text.substr(eq + 1), loc));
    }
    return out;
}

struct Split {
    std::vector<Token> left;
    std::vector<Token> right;
    bool has_arrow = false;
};

Split split_arrow(const Line& line) {
    Split s;
    auto arrow = line.content.find('>');
    int base = line.indent + 1;
    if (arrow == std::string_view::npos) {
        s.left = tokenize(line.content, base);
        return s;
    }
    s.has_arrow = true;
    s.left = tokenize(line.content.substr(0, arrow), base);
    s.right = tokenize(line.content.substr(arrow + 1), base + static_cast<int>(arrow) + 1);
    return s;
}

class Parser {
public:
    explicit Parser(std::string_view text) : lines_(split_lines(text)) {}

    GameDescription run() {
        if (lines_.empty()) throw Error(ErrorKind::SyntaxError, "empty game description", {1, 1});
        parse_header(lines_.front());
        int step = 0;
        int prev_depth = 0;
        for (std::size_t i = 1; i < lines_.size(); ++i) {
            const Line& line = lines_[i];
            SourceLoc loc{line.number, line.indent + 1};
            if (line.indent == 0) throw Error(ErrorKind::SyntaxError, "only one top-level BasicGame block allowed", loc);
            if (step == 0) step = line.indent;
            if (line.indent % step != 0) {
                throw Error(ErrorKind::SyntaxError,
                            "indentation is not a multiple of the block step " + std::to_string(step), loc);
            }
            int depth = line.indent / step;
            if (depth > prev_depth + 1) throw Error(ErrorKind::SyntaxError, "unexpected indentation", loc);
            if (depth == 1) {
                open_section(line);
            } else {
                if (section_ < 0) throw Error(ErrorKind::SyntaxError, "entry outside of a section", loc);
                if (section_ != 0 && depth > 2) {
                    throw Error(ErrorKind::SyntaxError, "nesting is only allowed in SpriteSet", loc);
                }
                switch (section_) {
                    case 0: parse_sprite(line, depth); break;
                    case 1: parse_interaction(line); break;
                    case 2: parse_termination(line); break;
                    case 3: parse_mapping(line); break;
                }
            }
            prev_depth = depth;
        }
        int end_line = lines_.back().number + 1;
        for (std::size_t s = 0; s < kSections.size(); ++s) {
            if (!seen_[s]) {
                throw Error(ErrorKind::SyntaxError, "missing section " + std::string(kSections[s]), {end_line, 1});
            }
        }
        validate();
        return std::move(desc_);
    }

private:
    void parse_header(const Line& line) {
        auto tokens = tokenize(line.content, line.indent + 1);
        if (line.indent != 0 || tokens.empty() || tokens[0].text != "BasicGame") {
            throw Error(ErrorKind::SyntaxError, "expected 'BasicGame' header", {line.number, line.indent + 1});
        }
        auto params = parse_params(std::span(tokens).subspan(1), game_params(), line.number);
        if (auto it = params.find("name"); it != params.end()) desc_.name = std::get<std::string>(it->second);
    }

    void open_section(const Line& line) {
        SourceLoc loc{line.number, line.indent + 1};
        auto tokens = tokenize(line.content, line.indent + 1);
        auto it = std::find(kSections.begin(), kSections.end(), tokens[0].text);
        if (tokens.size() != 1 || it == kSections.end()) {
            throw Error(ErrorKind::SyntaxError, "unknown section '" + std::string(line.content) + "'", loc);
        }
        section_ = static_cast<int>(it - kSections.begin());
        if (seen_[section_]) throw Error(ErrorKind::SyntaxError, "duplicate section " + std::string(*it), loc);
        seen_[section_] = true;
        sprite_stack_.clear();
    }

    void parse_sprite(const Line& line, int depth) {
        SourceLoc loc{line.number, line.indent + 1};
        Split s = split_arrow(line);
        if (!s.has_arrow) throw Error(ErrorKind::SyntaxError, "expected '>' in sprite declaration", loc);
        if (s.left.size() != 1 || !is_identifier(s.left[0].text)) {
            throw Error(ErrorKind::SyntaxError, "expected a single sprite identifier before '>'", loc);
        }
        std::string id(s.left[0].text);
        if (id == kEos) throw Error(ErrorKind::InvalidValue, "EOS is reserved", loc);
        if (desc_.find_sprite(id) >= 0) throw Error(ErrorKind::DuplicateSpriteId, "duplicate sprite '" + id + "'", loc);

        sprite_stack_.resize(static_cast<std::size_t>(depth - 2));
        SpriteDef def;
        def.id = id;
        def.loc = loc;
        def.parent = sprite_stack_.empty() ? -1 : sprite_stack_.back();

        std::span<const Token> rest(s.right);
        if (!rest.empty() && rest[0].text.find('=') == std::string_view::npos) {
            auto cls = parse_sprite_class(rest[0].text);
            if (!cls) {
                throw Error(ErrorKind::UnknownClass, "unknown sprite class '" + std::string(rest[0].text) + "'",
                            {line.number, rest[0].column});
            }
            def.declared_class = cls;
            rest = rest.subspan(1);
        }
        std::optional<SpriteClass> cls = def.declared_class;
        if (!cls && def.parent >= 0) cls = desc_.resolved_class(def.parent);
        def.params = parse_params(rest, cls ? sprite_params(*cls) : common_sprite_params(), line.number);

        desc_.sprites.push_back(std::move(def));
        sprite_stack_.push_back(static_cast<int>(desc_.sprites.size()) - 1);
    }

    void parse_interaction(const Line& line) {
        SourceLoc loc{line.number, line.indent + 1};
        Split s = split_arrow(line);
        if (!s.has_arrow) throw Error(ErrorKind::SyntaxError, "expected '>' in interaction", loc);
        if (s.left.size() != 2) throw Error(ErrorKind::SyntaxError, "interaction needs exactly two sprites", loc);
        for (const auto& t : s.left) {
            if (!is_identifier(t.text)) {
                throw Error(ErrorKind::SyntaxError, "bad sprite identifier '" + std::string(t.text) + "'",
                            {line.number, t.column});
            }
        }
        if (s.right.empty()) throw Error(ErrorKind::SyntaxError, "missing effect after '>'", loc);
        auto effect = parse_effect_class(s.right[0].text);
        if (!effect) {
            throw Error(ErrorKind::UnknownClass, "unknown effect '" + std::string(s.right[0].text) + "'",
                        {line.number, s.right[0].column});
        }
        InteractionRule rule;
        rule.first = std::string(s.left[0].text);
        rule.second = std::string(s.left[1].text);
        rule.effect = *effect;
        rule.params = parse_params(std::span(s.right).subspan(1), effect_params(*effect), line.number);
        rule.loc = loc;
        desc_.interactions.push_back(std::move(rule));
    }

    void parse_termination(const Line& line) {
        SourceLoc loc{line.number, line.indent + 1};
        Split s = split_arrow(line);
        if (s.has_arrow) throw Error(ErrorKind::SyntaxError, "unexpected '>' in termination", loc);
        auto kind = parse_termination_kind(s.left[0].text);
        if (!kind) {
            throw Error(ErrorKind::UnknownClass, "unknown termination '" + std::string(s.left[0].text) + "'", loc);
        }
        TerminationRule rule;
        rule.kind = *kind;
        rule.params = parse_params(std::span(s.left).subspan(1), termination_params(*kind), line.number);
        rule.loc = loc;
        desc_.terminations.push_back(std::move(rule));
    }

    void parse_mapping(const Line& line) {
        SourceLoc loc{line.number, line.indent + 1};
        // the mapped character may itself be '>', so split after the first character
        std::string_view content = line.content;
        if (content.size() < 2 || content[1] != ' ') {
            throw Error(ErrorKind::SyntaxError, "expected '<char> > sprites...'", loc);
        }
        char ch = content[0];
        auto rest = tokenize(content.substr(1), line.indent + 2);
        if (rest.empty() || rest[0].text != ">") throw Error(ErrorKind::SyntaxError, "expected '>' after character", loc);
        if (rest.size() < 2) throw Error(ErrorKind::SyntaxError, "mapping lists no sprites", loc);
        if (desc_.level_mapping.count(ch)) {
            throw Error(ErrorKind::SyntaxError, std::string("duplicate mapping for '") + ch + "'", loc);
        }
        std::vector<std::string> ids;
        for (std::size_t i = 1; i < rest.size(); ++i) {
            if (!is_identifier(rest[i].text)) {
                throw Error(ErrorKind::SyntaxError, "bad sprite identifier '" + std::string(rest[i].text) + "'",
                            {line.number, rest[i].column});
            }
            ids.emplace_back(rest[i].text);
        }
        desc_.level_mapping.emplace(ch, std::move(ids));
        mapping_locs_.emplace(ch, loc);
    }

    void validate();

    std::vector<Line> lines_;
    GameDescription desc_;
    std::array<bool, 4> seen_{};
    int section_ = -1;
    std::vector<int> sprite_stack_;
    std::map<char, SourceLoc> mapping_locs_;
};

struct Reference {
    std::string id;
    SourceLoc loc;
    bool allow_eos = false;
    bool resource = false;
    bool concrete = false;  // must name a sprite with a class (instantiable)
};

void Parser::validate() {
    std::vector<Reference> refs;
    for (const auto& s : desc_.sprites) {
        for (const auto& [key, value] : s.params) {
            if (key == "stype") refs.push_back({std::get<std::string>(value), s.loc, false, false, true});
        }
    }
    for (const auto& r : desc_.interactions) {
        refs.push_back({r.first, r.loc});
        refs.push_back({r.second, r.loc, true});
        for (const auto& [key, value] : r.params) {
            if (key == "stype") refs.push_back({std::get<std::string>(value), r.loc, false, false, true});
            if (key == "resource") refs.push_back({std::get<std::string>(value), r.loc, false, true});
        }
    }
    for (const auto& t : desc_.terminations) {
        for (const auto& [key, value] : t.params) {
            if (key.rfind("stype", 0) == 0) refs.push_back({std::get<std::string>(value), t.loc});
        }
    }
    for (const auto& [ch, ids] : desc_.level_mapping) {
        for (const auto& id : ids) refs.push_back({id, mapping_locs_[ch], false, false, true});
    }

    // Reserved identifiers get GVGAI-style defaults when referenced but not declared.
    for (auto [reserved, cls] : {std::pair{"avatar", SpriteClass::MovingAvatar}, std::pair{"wall", SpriteClass::Immovable}}) {
        bool used = std::any_of(refs.begin(), refs.end(), [&](const Reference& r) { return r.id == reserved; });
        if (used && desc_.find_sprite(reserved) < 0) {
            SpriteDef def;
            def.id = reserved;
            def.declared_class = cls;
            def.implicit = true;
            desc_.sprites.push_back(std::move(def));
        }
    }

    for (const auto& r : refs) {
        if (r.id == kEos) {
            if (!r.allow_eos) {
                throw Error(ErrorKind::UnresolvedReference, "EOS may only appear as the second sprite of an interaction",
                            r.loc);
            }
            continue;
        }
        int idx = desc_.find_sprite(r.id);
        if (idx < 0) throw Error(ErrorKind::UnresolvedReference, "undeclared sprite '" + r.id + "'", r.loc);
        auto cls = desc_.resolved_class(idx);
        if (r.resource && cls != SpriteClass::Resource) {
            throw Error(ErrorKind::InvalidValue, "'" + r.id + "' is not a Resource sprite", r.loc);
        }
        if (r.concrete && !cls) {
            throw Error(ErrorKind::InvalidValue, "'" + r.id + "' has no sprite class and cannot be instantiated", r.loc);
        }
    }

    int resources = 0;
    for (int i = 0; i < static_cast<int>(desc_.sprites.size()); ++i) {
        const auto& def = desc_.sprites[static_cast<std::size_t>(i)];
        auto cls = desc_.resolved_class(i);
        if (!cls) continue;
        if (*cls == SpriteClass::Resource) ++resources;
        auto specs = sprite_params(*cls);
        for (int a = i; a >= 0; a = desc_.sprites[static_cast<std::size_t>(a)].parent) {
            const auto& anc = desc_.sprites[static_cast<std::size_t>(a)];
            for (const auto& [key, value] : anc.params) {
                if (!find_param(specs, key)) {
                    throw Error(ErrorKind::UnknownParameter,
                                "parameter '" + key + "' is not valid for " + std::string(to_string(*cls)) +
                                    " sprite '" + def.id + "'",
                                anc.loc);
                }
            }
        }
        for (const auto& spec : specs) {
            if (spec.required && !desc_.resolved_param(i, spec.key)) {
                throw Error(ErrorKind::InvalidValue,
                            "sprite '" + def.id + "' requires parameter '" + std::string(spec.key) + "'", def.loc);
            }
        }
    }
    if (resources > kMaxResourceTypes) {
        throw Error(ErrorKind::InvalidValue, "at most " + std::to_string(kMaxResourceTypes) + " Resource sprites supported");
    }
}

void write_params(std::string& out, const ParamMap& params) {
    for (const auto& [key, value] : params) {
        out += ' ';
        out += key;
        out += '=';
        out += format_param(value);
    }
}

}  // namespace

int GameDescription::find_sprite(std::string_view id) const {
    for (std::size_t i = 0; i < sprites.size(); ++i) {
        if (sprites[i].id == id) return static_cast<int>(i);
    }
    return -1;
}

std::optional<SpriteClass> GameDescription::resolved_class(int index) const {
    for (int i = index; i >= 0; i = sprites[static_cast<std::size_t>(i)].parent) {
        if (sprites[static_cast<std::size_t>(i)].declared_class) return sprites[static_cast<std::size_t>(i)].declared_class;
    }
    return std::nullopt;
}

std::optional<ParamValue> GameDescription::resolved_param(int index, std::string_view key) const {
    for (int i = index; i >= 0; i = sprites[static_cast<std::size_t>(i)].parent) {
        const auto& params = sprites[static_cast<std::size_t>(i)].params;
        if (auto it = params.find(std::string(key)); it != params.end()) return it->second;
    }
    auto cls = resolved_class(index);
    auto specs = cls ? sprite_params(*cls) : common_sprite_params();
    if (const auto* spec = find_param(specs, key); spec && spec->fallback) return spec->fallback;
    return std::nullopt;
}

int GameDescription::subtree_end(int index) const {
    int j = index + 1;
    auto descends = [&](int k) {
        for (int p = sprites[static_cast<std::size_t>(k)].parent; p >= 0; p = sprites[static_cast<std::size_t>(p)].parent) {
            if (p == index) return true;
        }
        return false;
    };
    while (j < static_cast<int>(sprites.size()) && descends(j)) ++j;
    return j;
}

GameDescription parse_game(std::string_view text) { return Parser(text).run(); }

LevelGrid parse_level(std::string_view text, const GameDescription& desc) {
    std::vector<std::string_view> rows;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view row = text.substr(pos, end - pos);
        if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
        rows.push_back(row);
        pos = end + 1;
    }
    while (!rows.empty() && rows.back().empty()) rows.pop_back();
    if (rows.empty() || rows[0].empty()) throw Error(ErrorKind::RaggedGrid, "level is empty", {1, 1});

    LevelGrid grid;
    grid.width = static_cast<int>(rows[0].size());
    grid.height = static_cast<int>(rows.size());
    grid.cells.resize(static_cast<std::size_t>(grid.width * grid.height));
    int avatars = 0;
    for (int y = 0; y < grid.height; ++y) {
        const auto& row = rows[static_cast<std::size_t>(y)];
        if (static_cast<int>(row.size()) != grid.width) {
            throw Error(ErrorKind::RaggedGrid,
                        "row " + std::to_string(y + 1) + " has length " + std::to_string(row.size()) + ", expected " +
                            std::to_string(grid.width),
                        {y + 1, 1});
        }
        for (int x = 0; x < grid.width; ++x) {
            char ch = row[static_cast<std::size_t>(x)];
            if (ch == kBlankCell) continue;
            auto it = desc.level_mapping.find(ch);
            if (it == desc.level_mapping.end()) {
                throw Error(ErrorKind::UnmappedCharacter,
                            std::string("character '") + ch + "' at column " + std::to_string(x + 1) + ", row " +
                                std::to_string(y + 1) + " has no level mapping",
                            {y + 1, x + 1});
            }
            auto& cell = grid.cells[static_cast<std::size_t>(y * grid.width + x)];
            cell = it->second;
            for (const auto& id : cell) {
                int idx = desc.find_sprite(id);
                auto cls = idx >= 0 ? desc.resolved_class(idx) : std::nullopt;
                if (cls && is_avatar(*cls)) {
                    ++avatars;
                    grid.avatar_start = {x, y};
                }
            }
        }
    }
    if (avatars != 1) {
        throw Error(ErrorKind::MissingAvatar,
                    "level must place exactly one avatar, found " + std::to_string(avatars));
    }
    return grid;
}

GameDescription normalized(const GameDescription& desc) {
    GameDescription out = desc;
    for (auto& s : out.sprites) s.loc = {};
    for (auto& r : out.interactions) r.loc = {};
    for (auto& t : out.terminations) t.loc = {};

    // A declared parameter is redundant when removing it leaves the resolved value
    // of the sprite and of every descendant unchanged.
    for (int i = 0; i < static_cast<int>(out.sprites.size()); ++i) {
        auto& params = out.sprites[static_cast<std::size_t>(i)].params;
        int end = out.subtree_end(i);
        for (auto it = params.begin(); it != params.end();) {
            std::string key = it->first;
            std::vector<std::optional<ParamValue>> before;
            for (int k = i; k < end; ++k) before.push_back(out.resolved_param(k, key));
            ParamValue saved = it->second;
            it = params.erase(it);
            bool same = true;
            for (int k = i; k < end && same; ++k) same = out.resolved_param(k, key) == before[static_cast<std::size_t>(k - i)];
            if (!same) it = params.emplace_hint(it, key, saved), ++it;
        }
    }
    auto drop_defaults = [](ParamMap& params, std::span<const ParamSpec> specs) {
        for (auto it = params.begin(); it != params.end();) {
            const auto* spec = find_param(specs, it->first);
            if (spec && spec->fallback && *spec->fallback == it->second) {
                it = params.erase(it);
            } else {
                ++it;
            }
        }
    };
    for (auto& r : out.interactions) drop_defaults(r.params, effect_params(r.effect));
    for (auto& t : out.terminations) drop_defaults(t.params, termination_params(t.kind));
    return out;
}

bool structurally_equal(const GameDescription& a, const GameDescription& b) { return normalized(a) == normalized(b); }

std::string unparse(const GameDescription& input) {
    GameDescription desc = normalized(input);
    std::string out = "BasicGame";
    if (!desc.name.empty()) out += " name=" + desc.name;
    out += "\n    SpriteSet\n";
    for (const auto& s : desc.sprites) {
        if (s.implicit) continue;
        int depth = 0;
        for (int p = s.parent; p >= 0; p = desc.sprites[static_cast<std::size_t>(p)].parent) ++depth;
        out.append(static_cast<std::size_t>(8 + 4 * depth), ' ');
        out += s.id + " >";
        if (s.declared_class) {
            out += ' ';
            out += to_string(*s.declared_class);
        }
        write_params(out, s.params);
        out += '\n';
    }
    out += "    InteractionSet\n";
    for (const auto& r : desc.interactions) {
        out += "        " + r.first + " " + r.second + " > " + std::string(to_string(r.effect));
        write_params(out, r.params);
        out += '\n';
    }
    out += "    TerminationSet\n";
    for (const auto& t : desc.terminations) {
        out += "        " + std::string(to_string(t.kind));
        write_params(out, t.params);
        out += '\n';
    }
    out += "    LevelMapping\n";
    for (const auto& [ch, ids] : desc.level_mapping) {
        out += "        ";
        out += ch;
        out += " >";
        for (const auto& id : ids) out += " " + id;
        out += '\n';
    }
    return out;
}

}  // namespace gvg
