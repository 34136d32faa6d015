"""
CSS styles for the run viewer.
"""

from ..constants import FILE_TREE_WIDTH

APP_CSS = f"""
Screen {{
    background: $surface;
}}

#file-tree {{
    display: none;
    width: {FILE_TREE_WIDTH};
    dock: left;
    overflow-y: auto;
}}

#file-tree.visible {{
    display: block;
}}

#main-container {{
    height: 1fr;
}}

#content-area {{
    overflow-y: auto;
}}

VerticalScroll {{
    height: 1fr;
    margin: 1 2;
}}

#markdown-view {{
    display: block;
}}

#markdown-view.hidden {{
    display: none;
}}

#matrix-view {{
    display: none;
    height: auto;
}}

#matrix-view.visible {{
    display: block;
}}
"""
