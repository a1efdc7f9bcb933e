#!/usr/bin/env python3
"""boostkit 启动脚本"""

import os
import sys
import subprocess


def main():
    """主函数"""
    project_root = os.path.dirname(os.path.abspath(__file__))
    if project_root not in sys.path:
        sys.path.insert(0, project_root)

    os.environ['PYTHONPATH'] = project_root

    for dir_name in ['logs', 'output']:
        os.makedirs(os.path.join(project_root, dir_name), exist_ok=True)

    # 检查 .env 文件
    env_file = os.path.join(project_root, '.env')
    if not os.path.exists(env_file):
        print("创建 .env 配置文件...")
        with open(env_file, 'w', encoding='utf-8') as f:
            f.write("""# boostkit 环境配置
BOOSTKIT_DEBUG=false
BOOSTKIT_LOG_LEVEL=INFO
BOOSTKIT_SEED=20240917
BOOSTKIT_SCENARIO_DIR=./config/scenarios
BOOSTKIT_OUTPUT_DIR=./output
BOOSTKIT_LOG_DIR=./logs
""")
        print("已创建 .env 文件")

    main_script = os.path.join(project_root, 'src', 'main.py')
    args = sys.argv[1:] or ['--help']

    try:
        result = subprocess.run([sys.executable, main_script] + args, cwd=project_root)
    except KeyboardInterrupt:
        print("\n程序被用户中断")
        sys.exit(0)
    sys.exit(result.returncode)


if __name__ == "__main__":
    main()
