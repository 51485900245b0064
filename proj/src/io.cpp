#include "nifs/io.hpp"

#include "nifs/error.hpp"

#include <cstdio>
#include <fstream>
#include <system_error>

#include <json.hpp>

namespace nifs::io {

std::string number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quoted(std::string_view s)
{
    return nlohmann::json(std::string(s)).dump();
}

void write_atomic(const std::filesystem::path& path, std::string_view contents)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorKind::config, "cannot open " + tmp.string() + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw Error(ErrorKind::config, "failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string to_ppm(const Image& img)
{
    std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
    return out;
}

} // namespace nifs::io
