passed = (0x3F, 0xFF, 0x3F)
failed = (0xFF, 0x30, 0x30)
warning = (0xFF, 0xFF, 0x00)
error = (0xFF, 0x40, 0x40)
info = (0xE0, 0xE0, 0xE0)

# chart series, cycled in order
series = [
    (0x1F, 0x77, 0xB4),
    (0xD6, 0x27, 0x28),
    (0x2C, 0xA0, 0x2C),
    (0x94, 0x67, 0xBD),
    (0xFF, 0x7F, 0x0E),
    (0x8C, 0x56, 0x4B),
]
law_line = (0x55, 0x55, 0x55)
heatmap = "viridis"


def to_hex(rgb) -> str:
    return "#{:02x}{:02x}{:02x}".format(*rgb)
