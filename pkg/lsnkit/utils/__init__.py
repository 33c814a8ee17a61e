"""
工具函数模块：网络文件、轨迹文件和图表
"""
