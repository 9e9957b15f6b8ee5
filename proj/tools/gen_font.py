#!/usr/bin/env python3
"""Regenerate src/canvas/font_data.inc: an 8x16 binary bitmap of printable
ASCII rasterized from DejaVu Sans Mono, stored in unifont .hex layout."""
import sys
from PIL import Image, ImageDraw, ImageFont

FONT = "/usr/share/fonts/truetype/dejavu/DejaVuSansMono.ttf"
W, H = 8, 16
THRESHOLD = 112


def render(font, ch):
    img = Image.new("L", (W * 4, H * 4), 0)
    ImageDraw.Draw(img).text((W, H), ch, font=font, fill=255)
    return img.load()


def ink_rows(px):
    return [y for y in range(H * 4) if any(px[x, y] >= THRESHOLD for x in range(W * 4))]


def glyph_rows(px, top):
    rows = []
    for y in range(H):
        bits = 0
        for x in range(W):
            if px[W + x, top + y] >= THRESHOLD:
                bits |= 0x80 >> x
        rows.append(bits)
    return rows


def main(out):
    font = ImageFont.truetype(FONT, 13)
    pixmaps = {cp: render(font, chr(cp)) for cp in range(0x20, 0x7F)}
    used = sorted({y for px in pixmaps.values() for y in ink_rows(px)})
    # center the union of all ink rows inside the cell
    top = used[0] - (H - (used[-1] - used[0] + 1)) // 2
    lines = []
    for cp in range(0x20, 0x7F):
        rows = glyph_rows(pixmaps[cp], top)
        lines.append("%04X:%s" % (cp, "".join("%02X" % r for r in rows)))
    with open(out, "w") as f:
        f.write("// Generated by tools/gen_font.py from DejaVu Sans Mono (Bitstream Vera license).\n")
        f.write("// unifont .hex layout: codepoint ':' 16 rows of 8 bits.\n")
        f.write("R\"HEX(\n")
        f.write("\n".join(lines))
        f.write("\n)HEX\"\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/canvas/font_data.inc")
