"""打靶法测试包"""
