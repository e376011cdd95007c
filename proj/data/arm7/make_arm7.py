"""Writes a 7-DOF demo arm: URDF plus coarse OBJ link meshes.

Joint frames and limits follow the Franka Panda; link bodies are cylinders
and boxes roughly covering the real links.
"""
import math
from pathlib import Path

HERE = Path(__file__).resolve().parent


def cylinder(p0, p1, radius, segments=16, rings=7):
    """Capped cylinder between two points, as (vertices, faces)."""
    ax = [b - a for a, b in zip(p0, p1)]
    length = math.sqrt(sum(c * c for c in ax))
    ax = [c / length for c in ax]
    helper = [1.0, 0.0, 0.0] if abs(ax[0]) < 0.9 else [0.0, 1.0, 0.0]
    u = cross(ax, helper)
    un = math.sqrt(sum(c * c for c in u))
    u = [c / un for c in u]
    v = cross(ax, u)
    verts, faces = [], []
    for r in range(rings):
        s = r / (rings - 1)
        c = [a + s * (b - a) for a, b in zip(p0, p1)]
        for k in range(segments):
            th = 2 * math.pi * k / segments
            verts.append([c[i] + radius * (math.cos(th) * u[i] + math.sin(th) * v[i]) for i in range(3)])
    for r in range(rings - 1):
        for k in range(segments):
            a = r * segments + k
            b = r * segments + (k + 1) % segments
            faces.append((a, b, b + segments))
            faces.append((a, b + segments, a + segments))
    for cap, ring in ((p0, 0), (p1, rings - 1)):
        # Two concentric rings on each cap so the ends are covered too.
        centre = len(verts)
        verts.append(list(cap))
        inner = len(verts)
        for k in range(segments):
            th = 2 * math.pi * k / segments
            verts.append([cap[i] + 0.5 * radius * (math.cos(th) * u[i] + math.sin(th) * v[i]) for i in range(3)])
        for k in range(segments):
            faces.append((centre, inner + k, inner + (k + 1) % segments))
            faces.append((inner + k, ring * segments + k, ring * segments + (k + 1) % segments))
    return verts, faces


def box(lo, hi, steps=(4, 4, 4)):
    """Axis-aligned box surface sampled on a grid, as (vertices, faces)."""
    verts, index = [], {}
    n = steps
    for i in range(n[0] + 1):
        for j in range(n[1] + 1):
            for k in range(n[2] + 1):
                if 0 < i < n[0] and 0 < j < n[1] and 0 < k < n[2]:
                    continue
                index[(i, j, k)] = len(verts)
                verts.append([lo[0] + (hi[0] - lo[0]) * i / n[0],
                              lo[1] + (hi[1] - lo[1]) * j / n[1],
                              lo[2] + (hi[2] - lo[2]) * k / n[2]])
    faces = []
    for axis in range(3):
        a1, a2 = [x for x in range(3) if x != axis]
        for side in (0, n[axis]):
            for p in range(n[a1]):
                for q in range(n[a2]):
                    def key(pp, qq):
                        c = [0, 0, 0]
                        c[axis], c[a1], c[a2] = side, pp, qq
                        return index[tuple(c)]
                    faces.append((key(p, q), key(p + 1, q), key(p + 1, q + 1)))
                    faces.append((key(p, q), key(p + 1, q + 1), key(p, q + 1)))
    return verts, faces


def cross(a, b):
    return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]


def merge(*parts):
    verts, faces = [], []
    for v, f in parts:
        off = len(verts)
        verts += v
        faces += [tuple(i + off for i in tri) for tri in f]
    return verts, faces


def write_obj(name, mesh):
    verts, faces = mesh
    with open(HERE / "meshes" / f"{name}.obj", "w") as out:
        out.write(f"# {name}\n")
        for v in verts:
            out.write("v {:.6f} {:.6f} {:.6f}\n".format(*v))
        for f in faces:
            out.write("f {} {} {}\n".format(*(i + 1 for i in f)))


LINKS = {
    "base_link": cylinder([0, 0, 0.0], [0, 0, 0.15], 0.07),
    "link1": cylinder([0, 0, -0.18], [0, 0, 0.0], 0.06),
    "link2": cylinder([0, 0, 0], [0, -0.16, 0], 0.06),
    "link3": merge(cylinder([0, 0, -0.15], [0, 0, 0.0], 0.055), cylinder([0, 0, 0], [0.0825, 0, 0], 0.05, rings=3)),
    "link4": merge(cylinder([0, 0, 0], [-0.0825, 0.1, 0], 0.055, rings=5)),
    "link5": cylinder([0, 0, -0.26], [0, 0, -0.02], 0.05),
    "link6": cylinder([0, 0, 0], [0.088, 0, 0], 0.05, rings=4),
    "link7": cylinder([0, 0, -0.02], [0, 0, 0.08], 0.045, rings=5),
    "hand": merge(box([-0.025, -0.1, 0.0], [0.025, 0.1, 0.06], (2, 8, 3)),
                  box([-0.01, 0.03, 0.06], [0.01, 0.05, 0.11], (1, 1, 4)),
                  box([-0.01, -0.05, 0.06], [0.01, -0.03, 0.11], (1, 1, 4))),
}

PI = math.pi
JOINTS = [
    # name, parent, child, xyz, rpy, lower, upper, velocity
    ("joint1", "base_link", "link1", (0, 0, 0.333), (0, 0, 0), -2.8973, 2.8973, 2.175),
    ("joint2", "link1", "link2", (0, 0, 0), (-PI / 2, 0, 0), -1.7628, 1.7628, 2.175),
    ("joint3", "link2", "link3", (0, -0.316, 0), (PI / 2, 0, 0), -2.8973, 2.8973, 2.175),
    ("joint4", "link3", "link4", (0.0825, 0, 0), (PI / 2, 0, 0), -3.0718, -0.0698, 2.175),
    ("joint5", "link4", "link5", (-0.0825, 0.384, 0), (-PI / 2, 0, 0), -2.8973, 2.8973, 2.61),
    ("joint6", "link5", "link6", (0, 0, 0), (PI / 2, 0, 0), -0.0175, 3.7525, 2.61),
    ("joint7", "link6", "link7", (0.088, 0, 0), (PI / 2, 0, 0), -2.8973, 2.8973, 2.61),
]


def main():
    (HERE / "meshes").mkdir(exist_ok=True)
    for name, mesh in LINKS.items():
        write_obj(name, mesh)
    lines = ['<?xml version="1.0"?>', '<robot name="arm7">']
    for name in LINKS:
        lines += [f'  <link name="{name}">',
                  f'    <visual><geometry><mesh filename="meshes/{name}.obj"/></geometry></visual>',
                  '  </link>']
    for name, parent, child, xyz, rpy, lo, hi, vel in JOINTS:
        lines += [f'  <joint name="{name}" type="revolute">',
                  f'    <parent link="{parent}"/>', f'    <child link="{child}"/>',
                  '    <origin xyz="{} {} {}" rpy="{:.10f} {:.10f} {:.10f}"/>'.format(*xyz, *rpy),
                  '    <axis xyz="0 0 1"/>',
                  f'    <limit lower="{lo}" upper="{hi}" effort="87" velocity="{vel}"/>',
                  '  </joint>']
    lines += ['  <joint name="hand_joint" type="fixed">',
              '    <parent link="link7"/>', '    <child link="hand"/>',
              '    <origin xyz="0 0 0.107" rpy="0 0 {:.10f}"/>'.format(-PI / 4),
              '  </joint>', '</robot>', '']
    (HERE / "arm7.urdf").write_text("\n".join(lines))


if __name__ == "__main__":
    main()
