"""Hand-rolled SVG polyline plotting (no plotting dependency)."""

import numpy as np

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]


def _scale(vals, lo, hi, out_lo, out_hi):
    span = hi - lo if hi > lo else 1.0
    return out_lo + (np.asarray(vals) - lo) * (out_hi - out_lo) / span


def svg_curves(path, curves, width=640, height=480, margin=48, title=""):
    """Write a polyline plot; curves is a list of (xs, ys, label)."""
    xs_all = np.concatenate([np.asarray(c[0], float) for c in curves])
    ys_all = np.concatenate([np.asarray(c[1], float) for c in curves])
    x_lo, x_hi = float(xs_all.min()), float(xs_all.max())
    y_lo, y_hi = float(ys_all.min()), float(ys_all.max())
    pad_y = 0.05 * (y_hi - y_lo or 1.0)
    y_lo, y_hi = y_lo - pad_y, y_hi + pad_y

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{margin}" y="{margin}" width="{width - 2 * margin}" '
        f'height="{height - 2 * margin}" fill="none" stroke="#444"/>',
    ]
    if title:
        lines.append(f'<text x="{width / 2}" y="{margin - 12}" text-anchor="middle" '
                     f'font-family="monospace" font-size="13">{title}</text>')
    for k, lab, v in ((0, f"{x_lo:.3g}", x_lo), (1, f"{x_hi:.3g}", x_hi)):
        px = _scale([v], x_lo, x_hi, margin, width - margin)[0]
        lines.append(f'<text x="{px}" y="{height - margin + 16}" text-anchor="middle" '
                     f'font-family="monospace" font-size="11">{lab}</text>')
    for lab, v in ((f"{y_lo:.3g}", y_lo), (f"{y_hi:.3g}", y_hi)):
        py = _scale([v], y_lo, y_hi, height - margin, margin)[0]
        lines.append(f'<text x="{margin - 6}" y="{py + 4}" text-anchor="end" '
                     f'font-family="monospace" font-size="11">{lab}</text>')

    for i, (xs, ys, label) in enumerate(curves):
        px = _scale(xs, x_lo, x_hi, margin, width - margin)
        py = _scale(ys, y_lo, y_hi, height - margin, margin)
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        color = _COLORS[i % len(_COLORS)]
        lines.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                     f'stroke-width="1.2"/>')
        if label:
            lines.append(f'<text x="{width - margin - 4}" y="{margin + 16 + 14 * i}" '
                         f'text-anchor="end" font-family="monospace" font-size="11" '
                         f'fill="{color}">{label}</text>')
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return path
