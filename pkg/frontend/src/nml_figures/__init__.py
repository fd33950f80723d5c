from .render import load_manifest, render as render_manifest

__all__ = ["load_manifest", "render_manifest"]
