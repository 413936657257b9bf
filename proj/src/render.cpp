#include "gvg/render.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <fstream>

namespace gvg {

PixelFrame render_pixels(const GameState& state, int tile_size) {
    if (tile_size < 1) throw Error(ErrorKind::InvalidValue, "tile_size must be >= 1");
    PixelFrame f;
    f.tile_size = tile_size;
    f.width = state.width * tile_size;
    f.height = state.height * tile_size;
    f.rgb.assign(static_cast<std::size_t>(f.width) * static_cast<std::size_t>(f.height) * 3, 0);
    const auto& types = state.game->types;
    for (int cy = 0; cy < state.height; ++cy) {
        for (int cx = 0; cx < state.width; ++cx) {
            int top = -1;
            for (auto i : state.at(cx, cy)) top = std::max<int>(top, state.sprites[i].type);
            Rgb c = top < 0 ? kBackground : types[static_cast<std::size_t>(top)].color;
            for (int py = 0; py < tile_size; ++py) {
                std::size_t row = static_cast<std::size_t>(cy * tile_size + py) * static_cast<std::size_t>(f.width);
                for (int px = 0; px < tile_size; ++px) {
                    std::size_t o = (row + static_cast<std::size_t>(cx * tile_size + px)) * 3;
                    f.rgb[o] = c.r;
                    f.rgb[o + 1] = c.g;
                    f.rgb[o + 2] = c.b;
                }
            }
        }
    }
    return f;
}

nlohmann::json render_grid(const GameState& state) {
    using nlohmann::json;
    json obs;
    obs["tick"] = state.tick;
    obs["score"] = state.score;
    obs["status"] = std::string(to_string(state.status));
    obs["width"] = state.width;
    obs["height"] = state.height;
    int ai = state.avatar_index();
    if (ai >= 0) {
        const auto& a = state.sprites[static_cast<std::size_t>(ai)];
        json res = json::object();
        const auto& slots = state.game->resource_types;
        for (std::size_t s = 0; s < slots.size(); ++s) {
            if (a.resources[s] != 0) res[std::to_string(slots[s])] = a.resources[s];
        }
        obs["avatar"] = {{"x", a.x}, {"y", a.y}, {"type", a.type}, {"orientation", std::string(to_string(a.orientation))},
                         {"resources", res}};
    } else {
        obs["avatar"] = nullptr;
    }
    json grid = json::array();
    for (int y = 0; y < state.height; ++y) {
        json row = json::array();
        for (int x = 0; x < state.width; ++x) {
            json cell = json::array();
            for (auto i : state.at(x, y)) cell.push_back(state.sprites[i].type);
            row.push_back(std::move(cell));
        }
        grid.push_back(std::move(row));
    }
    obs["grid"] = std::move(grid);
    return obs;
}

namespace {

void on_png_error(png_structp png, png_const_charp) { std::longjmp(png_jmpbuf(png), 1); }
void on_png_warning(png_structp, png_const_charp) {}

void write_to_vector(png_structp png, png_bytep data, png_size_t len) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + len);
}

struct Reader {
    const std::vector<std::uint8_t>* bytes;
    std::size_t pos;
};

void read_from_vector(png_structp png, png_bytep data, png_size_t len) {
    auto* r = static_cast<Reader*>(png_get_io_ptr(png));
    if (r->pos + len > r->bytes->size()) png_error(png, "truncated");
    std::memcpy(data, r->bytes->data() + r->pos, len);
    r->pos += len;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const PixelFrame& frame) {
    if (frame.width < 1 || frame.height < 1 ||
        frame.rgb.size() != static_cast<std::size_t>(frame.width) * static_cast<std::size_t>(frame.height) * 3) {
        throw Error(ErrorKind::InvalidValue, "frame buffer does not match its dimensions");
    }
    std::vector<std::uint8_t> out;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, on_png_error, on_png_warning);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error(ErrorKind::Io, "png: out of memory");
    }
    std::vector<png_bytep> rows(static_cast<std::size_t>(frame.height));
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorKind::Io, "png encoding failed");
    }
    png_set_write_fn(png, &out, write_to_vector, nullptr);
    png_set_IHDR(png, info, static_cast<png_uint_32>(frame.width), static_cast<png_uint_32>(frame.height), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    for (int y = 0; y < frame.height; ++y) {
        rows[static_cast<std::size_t>(y)] =
            const_cast<png_bytep>(frame.rgb.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(frame.width) * 3);
    }
    png_set_rows(png, info, rows.data());
    png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

PixelFrame decode_png(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) throw Error(ErrorKind::InvalidValue, "not a PNG");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, on_png_error, on_png_warning);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error(ErrorKind::Io, "png: out of memory");
    }
    Reader reader{&bytes, 0};
    PixelFrame f;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(ErrorKind::InvalidValue, "malformed PNG");
    }
    png_set_read_fn(png, &reader, read_from_vector);
    // normalise everything to 8-bit RGB
    png_read_png(png, info, PNG_TRANSFORM_STRIP_16 | PNG_TRANSFORM_PACKING | PNG_TRANSFORM_EXPAND | PNG_TRANSFORM_STRIP_ALPHA,
                 nullptr);
    f.width = static_cast<int>(png_get_image_width(png, info));
    f.height = static_cast<int>(png_get_image_height(png, info));
    int channels = png_get_channels(png, info);
    png_bytepp rows = png_get_rows(png, info);
    f.rgb.resize(static_cast<std::size_t>(f.width) * static_cast<std::size_t>(f.height) * 3);
    for (int y = 0; y < f.height; ++y) {
        for (int x = 0; x < f.width; ++x) {
            std::size_t o = (static_cast<std::size_t>(y) * static_cast<std::size_t>(f.width) + static_cast<std::size_t>(x)) * 3;
            const png_byte* p = rows[y] + x * channels;
            if (channels >= 3) {
                f.rgb[o] = p[0];
                f.rgb[o + 1] = p[1];
                f.rgb[o + 2] = p[2];
            } else {
                f.rgb[o] = f.rgb[o + 1] = f.rgb[o + 2] = p[0];
            }
        }
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return f;
}

void export_png(const PixelFrame& frame, const std::filesystem::path& path) {
    auto bytes = encode_png(frame);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

namespace {
constexpr char kB64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 2 < bytes.size(); i += 3) {
        std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        out += kB64[(v >> 18) & 63];
        out += kB64[(v >> 12) & 63];
        out += kB64[(v >> 6) & 63];
        out += kB64[v & 63];
    }
    if (i < bytes.size()) {
        std::uint32_t v = bytes[i] << 16;
        if (i + 1 < bytes.size()) v |= bytes[i + 1] << 8;
        out += kB64[(v >> 18) & 63];
        out += kB64[(v >> 12) & 63];
        out += i + 1 < bytes.size() ? kB64[(v >> 6) & 63] : '=';
        out += '=';
    }
    return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
    auto val = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    if (text.size() % 4 != 0) throw Error(ErrorKind::InvalidValue, "base64 length not a multiple of 4");
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 4 * 3);
    for (std::size_t i = 0; i < text.size(); i += 4) {
        int pad = 0;
        std::uint32_t v = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            char c = text[i + k];
            if (c == '=' && i + 4 == text.size() && k >= 2) {
                ++pad;
                v <<= 6;
                continue;
            }
            int d = val(c);
            if (d < 0 || pad > 0) throw Error(ErrorKind::InvalidValue, "bad base64 character");
            v = (v << 6) | static_cast<std::uint32_t>(d);
        }
        out.push_back(static_cast<std::uint8_t>(v >> 16));
        if (pad < 2) out.push_back(static_cast<std::uint8_t>(v >> 8));
        if (pad < 1) out.push_back(static_cast<std::uint8_t>(v));
    }
    return out;
}

}  // namespace gvg
