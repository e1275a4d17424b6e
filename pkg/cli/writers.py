"""输出表: CSV (17 位有效数字, '\n' 换行) 或 JSON 行对象数组 (NaN 写成 null)"""
import csv
import io
import json
import math


def format_value(value):
    if isinstance(value, str):
        return value
    return f'{value:.17g}'


def render_csv(header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def render_json(header, rows):
    records = [{name: _json_value(v) for name, v in zip(header, row)} for row in rows]
    return json.dumps(records, indent=2, allow_nan=False) + '\n'


def render(header, rows, fmt='csv'):
    return render_json(header, rows) if fmt == 'json' else render_csv(header, rows)


def write_output(text, path=None, stream=None):
    """path 为空时写到 stream (命令的 stdout)"""
    if path:
        with open(path, 'w', encoding='utf-8', newline='') as fh:
            fh.write(text)
    else:
        stream.write(text, ending='')
